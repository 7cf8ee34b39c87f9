"""
Command-line entry point for the priority channel system toolkit.
Every command prints one JSON document on stdout; diagnostics go to stderr.

Exit codes: 0 the property holds (or the command succeeded), 1 the property
fails or a budget ran out, 2 invalid usage or input.

Configurations are written `state:word,word,...` in the model's channel
order, with the empty word spelled as nothing (or `ε`).
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from config.settings import settings
from models.channel_system import Semantics
from models.gadgets import GadgetKind, GadgetSpec
from models.ordinal_terms import HardyBudget
from services.exceptions import BudgetExhaustedError, PcsError, ReplayError, SearchBudgetExceededError
from services.gadget_catalog import build_gadget
from services.lcs_translation import Flavor
from services.ordinal_codes import encode, eta
from services.ordinals import (
    fgh_eval,
    fund_seq,
    hardy_eval,
    leqo,
    maxot_bounds,
    natural_product,
    natural_sum,
    ord_cmp,
    to_cnf,
)
from services.pcs_semantics import internalize_run, replay_run, run_simulate
from services.priority_order import EqualityOrder, SubwordOrder, gen_pleq, pleq_witness
from services.run_normalizer import normalize_run
from services.tree_codes import strong_embed, tree_encode
from services.wsts_verifier import WstsVerifier
from utils.serialization import (
    config_from_json,
    dump_json,
    format_tree,
    format_word,
    load_model,
    model_to_json,
    parse_config,
    parse_labeled_word,
    parse_tree,
    parse_word,
    run_from_json,
    run_to_json,
    verdict_to_json,
)
from utils.term_parser import format_term, parse_term

logger = logging.getLogger("cli")

EXIT_OK, EXIT_FAILS, EXIT_USAGE = 0, 1, 2


def _emit(payload: Dict[str, Any]) -> None:
    print(dump_json(payload))


def _read_json(path: str) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def cmd_order(args: argparse.Namespace) -> int:
    if args.generalized:
        order = SubwordOrder() if args.generalized == "subword" else EqualityOrder()
        holds = gen_pleq(parse_labeled_word(args.x), parse_labeled_word(args.y), order)
        _emit({"pleq": holds})
        return EXIT_OK if holds else EXIT_FAILS
    x = parse_word(args.x, args.level)
    y = parse_word(args.y, args.level)
    gaps = pleq_witness(x, y)
    payload: Dict[str, Any] = {"pleq": gaps is not None}
    if gaps is not None:
        payload["witness"] = [format_word(gap, args.level) for gap in gaps]
    _emit(payload)
    return EXIT_OK if gaps is not None else EXIT_FAILS


def _cover_targets(path: str, model) -> List:
    data = _read_json(path)
    if isinstance(data, dict):
        data = [data]
    return [parse_config(item, model) if isinstance(item, str) else config_from_json(item, model) for item in data]


def cmd_verify(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    start = parse_config(args.start, model)
    verifier = WstsVerifier(model, args.max_configs)
    sem = Semantics(args.semantics)
    if args.cover:
        verdict = verifier.cover(start, _cover_targets(args.cover, model), sem)
    elif args.reach:
        verdict = verifier.reach_exact(start, parse_config(args.reach, model), sem)
    elif args.terminate:
        verdict = verifier.terminate(start, sem)
    else:
        goal = [name.strip() for name in args.inevitable.split(",") if name.strip()]
        verdict = verifier.inevitable_states(start, goal, sem)
    _emit(verdict_to_json(verdict, model))
    return EXIT_OK if verdict.holds else EXIT_FAILS


def cmd_sim(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    sem = Semantics(args.semantics)
    if args.replay:
        run = run_from_json(_read_json(args.replay), model)
        try:
            replay_run(model, run, sem)
        except ReplayError as e:
            logger.error(f"Replay failed: {e}")
            _emit({"valid": False, "index": e.index, "reason": e.reason})
            return EXIT_FAILS
        payload: Dict[str, Any] = {"valid": True, "steps": len(run)}
        if args.normalize:
            payload["run"] = run_to_json(normalize_run(model, run), model)
        elif args.internalize:
            payload["run"] = run_to_json(internalize_run(model, run), model)
        _emit(payload)
        return EXIT_OK
    if args.start is None:
        raise ValueError("--from is required without --replay")
    seed = settings.pcs_default_seed if args.seed is None else args.seed
    run = run_simulate(model, parse_config(args.start, model), sem, args.steps, seed)
    _emit(run_to_json(run, model))
    return EXIT_OK


def _budget(args: argparse.Namespace) -> HardyBudget:
    steps = settings.pcs_budget_steps if args.budget is None else args.budget
    return HardyBudget(max_value=settings.pcs_budget_value, max_steps=steps)


def _need(args: argparse.Namespace, count: int) -> List[str]:
    if len(args.operands) != count:
        raise ValueError(f"'{args.op}' takes {count} operand(s)")
    return args.operands


def cmd_ord(args: argparse.Namespace) -> int:
    op = args.op
    if op == "encode":
        (term,) = _need(args, 1)
        _emit({"code": format_word(encode(to_cnf(parse_term(term)), args.level))})
    elif op == "decode":
        (code,) = _need(args, 1)
        _emit({"term": format_term(eta(parse_word(code)))})
    elif op == "fund":
        term, n = _need(args, 2)
        _emit({"term": format_term(fund_seq(parse_term(term), int(n)))})
    elif op == "hardy":
        term, n = _need(args, 2)
        _emit({"value": hardy_eval(parse_term(term), int(n), _budget(args))})
    elif op == "fgh":
        k, n = _need(args, 2)
        _emit({"value": fgh_eval(parse_term(k), int(n), _budget(args))})
    elif op == "leqo":
        a, b = _need(args, 2)
        holds = leqo(to_cnf(parse_term(a)), to_cnf(parse_term(b)))
        _emit({"leqo": holds})
        return EXIT_OK if holds else EXIT_FAILS
    elif op == "cmp":
        a, b = _need(args, 2)
        _emit({"cmp": ord_cmp(parse_term(a), parse_term(b))})
    elif op in ("natsum", "natprod"):
        a, b = _need(args, 2)
        combine = natural_sum if op == "natsum" else natural_product
        _emit({"term": format_term(combine(parse_term(a), parse_term(b)))})
    elif op == "cnf":
        (term,) = _need(args, 1)
        _emit({"term": format_term(to_cnf(parse_term(term)))})
    elif op == "maxot":
        d, m, q = _need(args, 3)
        bounds = maxot_bounds(int(d), int(m), int(q))
        _emit({"bound": format_term(bounds.bound), "closed_form": format_term(bounds.closed_form)})
    elif op == "tree-encode":
        (tree,) = _need(args, 1)
        _emit({"code": format_word(tree_encode(parse_tree(tree), args.level))})
    else:
        t, u = _need(args, 2)
        holds = strong_embed(parse_tree(t), parse_tree(u))
        _emit({"embeds": holds, "trees": [format_tree(parse_tree(t)), format_tree(parse_tree(u))]})
        return EXIT_OK if holds else EXIT_FAILS
    return EXIT_OK


def _gadget_spec(args: argparse.Namespace) -> GadgetSpec:
    parameters: Dict[str, Any] = {"n": args.n, "alpha": args.alpha, "time_budget": args.time_budget, "flavor": args.flavor}
    if args.tm:
        parameters["tm"] = _read_json(args.tm)
    if args.lcs:
        parameters["lcs"] = _read_json(args.lcs)
    return GadgetSpec(kind=GadgetKind(args.kind), level=args.level, parameters=parameters)


def cmd_gen(args: argparse.Namespace) -> int:
    model = build_gadget(_gadget_spec(args))
    document = model_to_json(model)
    payload: Dict[str, Any] = {"states": len(model.states), "rules": len(model.rules)}
    if args.output:
        Path(args.output).write_text(dump_json(document) + "\n", encoding="utf-8")
        payload["output"] = args.output
    else:
        payload["model"] = document
    _emit(payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcs", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--log-level", default=None, help="logging level (default from PCS_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    order = sub.add_parser("order", help="priority embedding of two words")
    order.add_argument("x")
    order.add_argument("y")
    order.add_argument("--level", type=int, default=None)
    order.add_argument("--generalized", choices=["equality", "subword"], default=None,
                       help="compare labeled words `p:label,...` under a label order")
    order.set_defaults(handler=cmd_order)

    verify = sub.add_parser("verify", help="coverability, reachability, termination, inevitability")
    verify.add_argument("model")
    verify.add_argument("--from", dest="start", required=True)
    goal = verify.add_mutually_exclusive_group(required=True)
    goal.add_argument("--cover", metavar="TARGETS", help="JSON file with target configurations")
    goal.add_argument("--reach", metavar="CONFIG")
    goal.add_argument("--terminate", action="store_true")
    goal.add_argument("--inevitable", metavar="STATES", help="comma-separated control states")
    verify.add_argument("--semantics", default=Semantics.INTERNAL_SUPERSEDING.value, choices=[s.value for s in Semantics])
    verify.add_argument("--max-configs", type=int, default=None)
    verify.set_defaults(handler=cmd_verify)

    sim = sub.add_parser("sim", help="random simulation or replay of a stored run")
    sim.add_argument("model")
    sim.add_argument("--from", dest="start", default=None)
    sim.add_argument("--semantics", default=Semantics.WRITE_SUPERSEDING.value, choices=[s.value for s in Semantics])
    sim.add_argument("--steps", type=int, default=100)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--replay", metavar="RUNFILE", default=None)
    convert = sim.add_mutually_exclusive_group()
    convert.add_argument("--normalize", action="store_true", help="rewrite a replayed internal run as write-superseding")
    convert.add_argument("--internalize", action="store_true", help="rewrite a replayed write-superseding run as internal")
    sim.set_defaults(handler=cmd_sim)

    ord_parser = sub.add_parser("ord", help="ordinal terms, codes and trees")
    ord_parser.add_argument("op", choices=[
        "encode", "decode", "fund", "hardy", "fgh", "leqo", "cmp", "natsum", "natprod",
        "cnf", "maxot", "tree-encode", "tree-embed",
    ])
    ord_parser.add_argument("operands", nargs="*")
    ord_parser.add_argument("--level", type=int, default=0)
    ord_parser.add_argument("--budget", type=int, default=None, help="Hardy step budget")
    ord_parser.set_defaults(handler=cmd_ord)

    gen = sub.add_parser("gen", help="generate gadget models")
    gen.add_argument("kind", choices=[k.value for k in GadgetKind])
    gen.add_argument("--level", type=int, default=1)
    gen.add_argument("--tm", default=None, help="machine description (JSON)")
    gen.add_argument("--alpha", default=None, help="seed ordinal term")
    gen.add_argument("--n", type=int, default=None, help="seed counter")
    gen.add_argument("--time-budget", action="store_true")
    gen.add_argument("--lcs", default=None, help="lossy channel system description (JSON)")
    gen.add_argument("--flavor", default=Flavor.PLAIN.value, choices=[Flavor.PLAIN.value, Flavor.WEAK.value])
    gen.add_argument("-o", "--output", default=None)
    gen.set_defaults(handler=cmd_gen)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=(args.log_level or settings.pcs_log_level).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
    )
    try:
        return args.handler(args)
    except (BudgetExhaustedError, SearchBudgetExceededError) as e:
        logger.warning(f"Budget exhausted: {e}")
        _emit({"budget": True, "error": str(e)})
        return EXIT_FAILS
    except (PcsError, ValueError, KeyError, OSError) as e:
        logger.error(f"Error in {args.command}: {e}")
        _emit({"error": str(e)})
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

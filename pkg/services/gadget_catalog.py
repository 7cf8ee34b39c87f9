"""
Gadget Catalog
Builds the model described by a GadgetSpec.
"""

import logging

from models.channel_system import Pcs
from models.gadgets import GadgetKind, GadgetSpec
from services.exceptions import TranslationError
from services.hardy_gadgets import Direction, build_s1, build_s2, build_s3, build_s4, build_weak_hardy
from services.lcs_translation import Flavor, LcsModel, build_strict_reliable_sim, translate_lcs
from services.reduction import TinyTm, build_reduction
from utils.term_parser import parse_term

logger = logging.getLogger(__name__)

_STEP_GADGETS = {
    GadgetKind.S1: build_s1,
    GadgetKind.S2: build_s2,
    GadgetKind.S3: build_s3,
    GadgetKind.S4: build_s4,
}


def _require(spec: GadgetSpec, name: str):
    if spec.parameters.get(name) is None:
        raise TranslationError(f"{spec.kind.value} needs the parameter '{name}'")
    return spec.parameters[name]


def build_gadget(spec: GadgetSpec) -> Pcs:
    kind = spec.kind
    logger.info(f"Generating {kind.value} at level {spec.level}")
    if kind in _STEP_GADGETS:
        return _STEP_GADGETS[kind](spec.level).model
    if kind in (GadgetKind.WEAK_HARDY_FWD, GadgetKind.WEAK_HARDY_BWD):
        direction = Direction.FWD if kind == GadgetKind.WEAK_HARDY_FWD else Direction.BWD
        return build_weak_hardy(spec.level, direction).model
    if kind == GadgetKind.REDUCTION:
        tm = TinyTm.model_validate(_require(spec, "tm"))
        alpha = spec.parameters.get("alpha")
        return build_reduction(
            tm,
            parse_term(alpha) if alpha else None,
            spec.parameters.get("n"),
            bool(spec.parameters.get("time_budget", False)),
        ).model
    source = LcsModel.model_validate(_require(spec, "lcs"))
    if kind == GadgetKind.STRICT_RELIABLE_SIM:
        return build_strict_reliable_sim(source)
    if kind == GadgetKind.DLCS_SIM:
        return translate_lcs(source, Flavor.DLCS)
    return translate_lcs(source, Flavor(spec.parameters.get("flavor", Flavor.PLAIN.value)))

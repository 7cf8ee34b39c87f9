"""
Verification verdicts and the certificates that justify them
"""

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from models.channel_system import Config, Run


class CertificateKind(str, enum.Enum):
    RUN = "run"
    BASIS = "basis"
    DOMINATION = "domination"
    DEADLOCK = "deadlock"


@dataclass
class Certificate:
    """
    Evidence for a verdict.

    - RUN: a witness run.
    - BASIS: the saturated upward-closed set (negative coverability).
    - DOMINATION: a run plus indices i < j with run config i below config j.
    - DEADLOCK: a run ending in a configuration without successors.
    """
    kind: CertificateKind
    run: Optional[Run] = None
    basis: List[Config] = field(default_factory=list)
    indices: Optional[Tuple[int, int]] = None


@dataclass
class Verdict:
    holds: bool
    certificate: Certificate

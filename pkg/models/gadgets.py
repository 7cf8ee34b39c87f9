"""
Gadget descriptions accepted by the generator
"""

import enum
from typing import Any, Dict

from pydantic import BaseModel, Field


class GadgetKind(str, enum.Enum):
    S1 = "s1"
    S2 = "s2"
    S3 = "s3"
    S4 = "s4"
    WEAK_HARDY_FWD = "hardy-fwd"
    WEAK_HARDY_BWD = "hardy-bwd"
    REDUCTION = "reduction"
    LCS_SIM = "lcs-sim"
    DLCS_SIM = "dlcs-sim"
    STRICT_RELIABLE_SIM = "strict-sim"


class GadgetSpec(BaseModel):
    """
    Kind, code level and kind-specific parameters:

    - reduction: `tm` (machine description), optional `alpha` (term text),
      `n`, `time_budget`
    - lcs-sim: `lcs` (source system), `flavor` ("plain" or "weak")
    - dlcs-sim, strict-sim: `lcs`
    """
    kind: GadgetKind
    level: int = Field(default=1, ge=0)
    parameters: Dict[str, Any] = Field(default_factory=dict)

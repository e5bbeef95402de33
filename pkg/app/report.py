from __future__ import annotations

import json
import math
from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field


class Status(str, Enum):
    certified = "certified"
    certified_negative = "certified-negative"
    indeterminate = "indeterminate-at-precision"


EXIT_CODES = {
    Status.certified: 0,
    Status.certified_negative: 1,
    Status.indeterminate: 2,
}
EXIT_INPUT_ERROR = 3


def fmt_precision(n: Union[int, float, None]) -> Optional[Union[int, str]]:
    """Précision certifiée pour le JSON : entier, "exact" (inf) ou None."""
    if n is None:
        return None
    if isinstance(n, float) and math.isinf(n):
        return "exact"
    return int(n)


class TaskResult(BaseModel):
    command: str
    target: str = ""
    status: Status
    diagnosis: str = ""
    precision: Optional[Union[int, str]] = None
    data: Dict[str, Any] = Field(default_factory=dict)


class Report(BaseModel):
    problem: Dict[str, Any] = Field(default_factory=dict)
    tasks: List[TaskResult] = Field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return max((EXIT_CODES[t.status] for t in self.tasks), default=0)

    def to_json(self) -> str:
        # ordre des clés canonique : deux exécutions identiques -> octets identiques
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False)

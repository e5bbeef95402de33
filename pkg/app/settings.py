from __future__ import annotations

import os
from typing import Optional

from pydantic import BaseModel, Field, ValidationError

from app.errors import ConfigMismatchError

DEFAULT_PRECISION = 32
DEFAULT_CAP = 24


class Settings(BaseModel):
    """Réglages globaux (précision p-adique, cap X-adique, niveau de log)."""
    precision: int = Field(DEFAULT_PRECISION, ge=1)
    cap: int = Field(DEFAULT_CAP, ge=1)
    total_cap: Optional[int] = Field(None, ge=1)
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        # Variables PADYN_* (éventuellement chargées depuis .env par main.py)
        values = {}
        for key in ("precision", "cap", "total_cap", "log_level"):
            raw = os.getenv(f"PADYN_{key.upper()}")
            if raw not in (None, ""):
                values[key] = raw
        try:
            return cls(**values)
        except ValidationError as ex:
            names = ", ".join(f"PADYN_{str(e['loc'][0]).upper()}" for e in ex.errors())
            raise ConfigMismatchError(f"Variable d'environnement invalide : {names}") from ex

    def effective_total_cap(self, cap: Optional[int] = None) -> int:
        if self.total_cap is not None:
            return self.total_cap
        return max(1, (cap or self.cap) // 2)

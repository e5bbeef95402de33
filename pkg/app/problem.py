from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.errors import ConfigMismatchError, ProblemInputError
from app.padic import PadicScalar, RingConfig
from app.series import TruncSeries
from app.settings import Settings

ScalarLiteral = Union[int, str, List[int]]


# ------------------------
# Schéma du document
# ------------------------

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RingSpec(_Strict):
    p: int
    residue_degree: int = Field(1, ge=1)
    modulus: Optional[List[int]] = None
    rel_precision: Optional[int] = Field(None, ge=1)


class SeriesSpec(_Strict):
    """Série explicite : `constant` = coefficients à partir du degré 0, `truncated` = série non polynomiale."""
    coeffs: List[ScalarLiteral]
    constant: bool = False
    truncated: bool = False


class AnalyzeTask(_Strict):
    command: Literal["analyze"]
    f: str = "f"
    m: Optional[int] = Field(None, ge=2)
    commuter: Optional[str] = None


class LogTask(_Strict):
    command: Literal["log"]
    f: str = "f"


class GroupTask(_Strict):
    command: Literal["group"]
    f: str = "f"
    log: Optional[str] = None  # logarithme fourni directement
    total_cap: Optional[int] = Field(None, ge=1)


class EndoTask(_Strict):
    command: Literal["endo"]
    f: str = "f"
    log: Optional[str] = None
    a: ScalarLiteral = 2
    compare: Optional[str] = None
    total_cap: Optional[int] = Field(None, ge=1)


class CommuteTask(_Strict):
    command: Literal["commute"]
    f: str = "f"
    g: Optional[str] = None
    a: Optional[ScalarLiteral] = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.g is None) == (self.a is None):
            raise ValueError("commute : exactement un des champs g / a")
        return self


class IsogenySpec(_Strict):
    h: str
    target: str


class SemiconjTask(_Strict):
    command: Literal["semiconj"]
    f: str = "f"
    m: Optional[int] = Field(2, ge=2)  # None : vérification d'isogénie seule
    u: Optional[str] = None
    isogeny: Optional[IsogenySpec] = None
    transport: int = Field(1, ge=0, le=3)


Task = Annotated[
    Union[AnalyzeTask, LogTask, GroupTask, EndoTask, CommuteTask, SemiconjTask],
    Field(discriminator="command"),
]
COMMANDS = ("analyze", "log", "group", "endo", "commute", "semiconj")


class ProblemDocument(_Strict):
    ring: RingSpec
    cap: Optional[int] = Field(None, ge=1)
    total_cap: Optional[int] = Field(None, ge=1)
    series: Dict[str, Union[List[ScalarLiteral], SeriesSpec]] = Field(default_factory=dict)
    tasks: List[Task] = Field(default_factory=list)


def default_task(command: str):
    """Tâche par défaut (série "f") quand le document n'en déclare aucune."""
    return ProblemDocument.model_validate(
        {"ring": {"p": 2}, "tasks": [{"command": command}]}
    ).tasks[0]


# ------------------------
# Littéraux scalaires
# ------------------------

_EXPLICIT = re.compile(r"^\s*(\d+)\s*\^\s*(-?\d+)\s*\*\s*(.+)$")


def parse_scalar(config: RingConfig, literal: ScalarLiteral) -> PadicScalar:
    """
    Entier, "-n", "a/b", "p^v*u" ou liste [c0, c1, ...] (élément Σ c_i ξ^i de l'extension).
    """
    if isinstance(literal, bool):
        raise ProblemInputError(f"Littéral booléen refusé : {literal!r}")
    if isinstance(literal, int):
        return PadicScalar.from_int(config, literal)
    if isinstance(literal, list):
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in literal):
            raise ProblemInputError(f"Élément d'extension invalide : {literal!r}")
        return PadicScalar.from_poly(config, literal)
    if not isinstance(literal, str):
        raise ProblemInputError(f"Littéral scalaire invalide : {literal!r}")
    m = _EXPLICIT.match(literal)
    if m:
        base, v, rest = int(m.group(1)), int(m.group(2)), m.group(3)
        if base != config.p:
            raise ProblemInputError(f"{literal!r} : base {base} ≠ p = {config.p}")
        return parse_scalar(config, rest.strip()) * PadicScalar.from_rational(config, Fraction(base) ** v)
    try:
        q = Fraction(literal.strip())
    except (ValueError, ZeroDivisionError) as ex:
        raise ProblemInputError(f"Littéral scalaire invalide : {literal!r}") from ex
    return PadicScalar.from_rational(config, q)


# ------------------------
# Problème résolu (anneau + séries)
# ------------------------

@dataclass(frozen=True)
class Problem:
    document: ProblemDocument
    config: RingConfig
    cap: int
    total_cap: int
    series: Dict[str, TruncSeries]
    source: Optional[str] = None

    def get(self, name: str) -> TruncSeries:
        try:
            return self.series[name]
        except KeyError:
            raise ProblemInputError(f"Série inconnue : {name!r} (disponibles : {sorted(self.series)})") from None

    def scalar(self, literal: ScalarLiteral) -> PadicScalar:
        return parse_scalar(self.config, literal)

    def tasks_for(self, command: str) -> List:
        found = [t for t in self.document.tasks if t.command == command]
        return found or [default_task(command)]

    def describe(self) -> Dict[str, object]:
        return {
            "ring": self.config.describe(),
            "p": self.config.p,
            "residue_degree": self.config.residue_degree,
            "modulus": list(self.config.modulus),
            "rel_precision": self.config.rel_precision,
            "cap": self.cap,
            "total_cap": self.total_cap,
            "source": self.source,
        }


def _build_series(config: RingConfig, cap: int, name: str,
                  spec: Union[List[ScalarLiteral], SeriesSpec]) -> TruncSeries:
    if isinstance(spec, SeriesSpec):
        raw, constant, truncated = spec.coeffs, spec.constant, spec.truncated
    else:
        raw, constant, truncated = spec, False, False
    try:
        values = [parse_scalar(config, c) for c in raw]
    except ProblemInputError as ex:
        raise ProblemInputError(f"Série {name!r} : {ex}") from ex
    if not constant:
        values = [PadicScalar.zero(config)] + values
    if truncated:
        return TruncSeries.from_values(config, values, min(cap, max(len(values) - 1, 0)), False)
    return TruncSeries.from_values(config, values, max(cap, len(values) - 1), True)


def build_problem(document: ProblemDocument, settings: Optional[Settings] = None,
                  precision: Optional[int] = None, cap: Optional[int] = None,
                  total_cap: Optional[int] = None, source: Optional[str] = None) -> Problem:
    """Priorité : option CLI > document > environnement > défaut."""
    settings = settings or Settings.from_env()
    ring = document.ring
    r = precision or ring.rel_precision or settings.precision
    D = cap or document.cap or settings.cap
    try:
        config = RingConfig(ring.p, ring.residue_degree, tuple(ring.modulus or ()), r)
    except (ValueError, ConfigMismatchError) as ex:
        raise ProblemInputError(f"Anneau invalide : {ex}") from ex
    N = total_cap or document.total_cap or Settings(cap=D, total_cap=settings.total_cap).effective_total_cap()
    series = {name: _build_series(config, D, name, spec) for name, spec in document.series.items()}
    return Problem(document, config, D, N, series, source)


def load_problem(path: Union[str, Path], settings: Optional[Settings] = None, **overrides) -> Problem:
    path = Path(path)
    if not path.exists():
        raise ProblemInputError(f"Fichier introuvable : {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        document = ProblemDocument.model_validate(data)
    except json.JSONDecodeError as ex:
        raise ProblemInputError(f"{path.name} : JSON invalide ({ex})") from ex
    except ValidationError as ex:
        raise ProblemInputError(f"{path.name} : schéma invalide\n{ex}") from ex
    return build_problem(document, settings, source=path.name, **overrides)

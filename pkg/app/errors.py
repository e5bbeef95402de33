from __future__ import annotations


class PadynError(Exception):
    """Racine de toutes les erreurs métier de padyn."""


class ConfigMismatchError(PadynError, ValueError):
    """Deux objets ne vivent pas sur la même RingConfig."""


class PrecisionExhaustedError(PadynError):
    """Un prédicat ne peut pas être certifié à la précision disponible."""


class PadicZeroDivisionError(PadynError, ZeroDivisionError):
    pass


class UnsupportedRamifiedRootError(PadynError, ValueError):
    """Racine m-ième avec p | m : extension ramifiée, hors périmètre."""


class NotAnMthPowerError(PadynError, ValueError):
    pass


class InfiniteWidegError(PadynError, ValueError):
    """Degré de Weierstrass infini (ou au-delà du cap)."""


class CapTooSmallError(PadynError, ValueError):
    pass


class HypothesisError(PadynError, ValueError):
    """Une hypothèse documentée d'une opération n'est pas satisfaite."""


class NormalizationRequiredError(HypothesisError):
    """u'(0) n'est pas ≡ 1 mod m : appliquer corollary_a_normalize d'abord."""


class TheoremViolationError(PadynError):
    """Les données contredisent un énoncé démontré (entrée incohérente ou cap trop petit)."""


class InvariantViolationError(PadynError, AssertionError):
    """Contrôle croisé interne en échec : bug ou précision mal suivie."""


class ProblemInputError(PadynError, ValueError):
    """Document problème invalide (schéma, littéral, série inconnue)."""

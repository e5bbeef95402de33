"""padyn : dynamique p-adique certifiée (séries, logarithme de Lubin, groupes formels)."""

__all__ = []

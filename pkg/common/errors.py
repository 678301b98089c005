# common/errors.py
"""
Jerarquía de excepciones del toolkit.
"""


class AntinomyError(Exception):
    """Base de todos los errores del toolkit."""


class CapExceededError(AntinomyError, RuntimeError):
    """Una enumeración o comprobación supera el límite configurado."""


class ScenarioMismatchError(AntinomyError, ValueError):
    """Objetos de escenarios distintos combinados en una operación."""


class DimensionMismatchError(AntinomyError, ValueError):
    """Cardinalidades incompatibles entre proceso, intervenciones o matrices."""


class InvalidCorrelationError(AntinomyError, ValueError):
    """Tabla no estocástica por columnas, o pesos de mezcla inválidos."""


class InfeasibleInputError(AntinomyError, ValueError):
    """LP infactible donde una entrada válida garantiza factibilidad."""


class UnsupportedWitnessError(AntinomyError, ValueError):
    """Operación de testigo fuera de su dominio."""


class InvalidInputError(AntinomyError, ValueError):
    """Flag o documento de entrada rechazado por la validación."""

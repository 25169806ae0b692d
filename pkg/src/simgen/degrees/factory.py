from typing import Dict, Type

from src.generics.factory import GenericFactory

from .base import DegreeFamily
from .impl.families import AbsNormalDegrees, ConstantDegrees, ParetoDegrees


class DegreeFamilyFactory(GenericFactory[DegreeFamily]):
    """Degree distributions; "pareto" takes a ``shape`` argument."""

    _registry: Dict[str, Type[DegreeFamily]] = {
        "constant": ConstantDegrees,
        "abs_normal": AbsNormalDegrees,
        "pareto": ParetoDegrees,
    }

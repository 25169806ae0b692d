from typing import Dict, Type

from src.generics.factory import GenericFactory

from .base import ClusteringMethod
from .impl.dtbm import DtbmFull, DtbmInit, Oracle
from .impl.spectral import Hosvd, HosvdPlus


class MethodFactory(GenericFactory[ClusteringMethod]):
    """Clustering methods keyed by their sweep name."""

    _registry: Dict[str, Type[ClusteringMethod]] = {
        "dtbm_init": DtbmInit,
        "dtbm_full": DtbmFull,
        "oracle": Oracle,
        "hosvd": Hosvd,
        "hosvd_plus": HosvdPlus,
    }

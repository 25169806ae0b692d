from typing import Dict, Type

from src.generics.factory import GenericFactory

from .base import Denoiser
from .impl.double_projection import DoubleProjectionDenoiser
from .impl.square_unfolding import SquareUnfoldingDenoiser


class DenoiserFactory(GenericFactory[Denoiser]):
    """Denoisers keyed by observation model."""

    _registry: Dict[str, Type[Denoiser]] = {
        "gaussian": DoubleProjectionDenoiser,
        "bernoulli": SquareUnfoldingDenoiser,
    }

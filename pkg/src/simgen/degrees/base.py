from abc import ABC, abstractmethod

import numpy as np
from numpy.typing import NDArray


class DegreeFamily(ABC):
    """Distribution of the raw degree parameters before cluster normalization."""

    @abstractmethod
    def draw(self, size: int, rng: np.random.Generator) -> NDArray[np.float64]:
        """Draw ``size`` i.i.d. positive degrees."""
        raise NotImplementedError

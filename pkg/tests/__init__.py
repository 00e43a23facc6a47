"""Tests"""
from typing import List, Optional

import numpy as np

from nncalc.network import NeuralNetwork, from_weights_strict


class RandomNetworkFactory:
    """Random strict ReLU networks with sparse weights in [-1, 1]"""

    def __init__(self, seed: int = 0, density: float = 0.7):
        self.rng = np.random.default_rng(seed)
        self.density = density

    def _sparse(self, shape) -> np.ndarray:
        values = self.rng.uniform(-1.0, 1.0, size=shape)
        return np.where(self.rng.uniform(size=shape) < self.density, values, 0.0)

    def network(
        self,
        dim_in: Optional[int] = None,
        dim_out: Optional[int] = None,
        depth: Optional[int] = None,
        min_depth: int = 1,
        max_depth: int = 4,
        max_width: int = 4,
    ) -> NeuralNetwork:
        depth = int(self.rng.integers(min_depth, max_depth + 1)) if depth is None else depth
        dims: List[int] = [int(self.rng.integers(1, max_width + 1)) for _ in range(depth + 1)]
        if dim_in is not None:
            dims[0] = dim_in
        if dim_out is not None:
            dims[-1] = dim_out
        weights = [(self._sparse((dims[i + 1], dims[i])), self._sparse(dims[i + 1])) for i in range(depth)]
        return from_weights_strict(weights, 1)

    def inputs(self, dim: int, count: int = 8) -> np.ndarray:
        return self.rng.uniform(-2.0, 2.0, size=(count, dim))

"""Base Builder"""
from __future__ import annotations
import abc
import functools
import logging
from typing import TYPE_CHECKING, Optional

from ..network import validate

if TYPE_CHECKING:
    from ..interface import ErrorCertificate, SizeReport
    from ..network import NeuralNetwork


logger = logging.getLogger(__name__)


def log_size(func):
    """Log the size of the network a builder function returns"""

    @functools.wraps(func)
    def inner(*args, **kwargs):
        net = func(*args, **kwargs)
        report = validate(net)
        logger.debug(
            '%s%s -> L=%s M=%s dim_in=%s dim_out=%s',
            func.__name__,
            args,
            report.layers,
            report.weights,
            report.dim_in,
            report.dim_out,
        )
        return net

    return inner


class BaseBuilder(metaclass=abc.ABCMeta):
    """A parameterized network construction together with its error and size claims"""

    name: str = ''
    _net: Optional['NeuralNetwork'] = None

    @abc.abstractmethod
    def _build(self) -> 'NeuralNetwork':
        """construct the network"""
        raise NotImplementedError

    @abc.abstractmethod
    def certify(self, samples: int = 0, seed: Optional[int] = None) -> 'ErrorCertificate':
        """measure the approximation error against the claimed bound"""
        raise NotImplementedError

    @abc.abstractmethod
    def size_bound(self, report: 'SizeReport') -> bool:
        """check the size report against the stated size law"""

    def build(self) -> 'NeuralNetwork':
        """Build once, later calls return the same network"""
        if self._net is None:
            self._net = self._build()
        return self._net

    def size_report(self) -> 'SizeReport':
        return validate(self.build())

from typing import Optional


class QuswapError(Exception):
    """Base class for all errors raised by quswap"""


class IncompatibleOperandsError(QuswapError, ValueError):
    """Operands differ in dimension, particle count or label shape"""


class DegenerateStateError(QuswapError, ValueError):
    """A state with (numerically) zero norm where a direction is required"""


class SizeGuardError(QuswapError, ValueError):
    """Requested state or basis exceeds the configured amplitude budget"""

    def __init__(self, dimension: int, exponent: int, limit: int):
        self.dimension = dimension
        self.exponent = exponent
        self.limit = limit
        super().__init__(
            f"{dimension}^{exponent} amplitudes exceed the size guard of {limit}"
        )


class ScenarioError(QuswapError, ValueError):
    """Invalid scenario parameters or scenario file"""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)

"""Multi-indices of the order profile (1, 1, 2, 2)"""
import re
from itertools import product
from typing import NamedTuple, Tuple

ORDER_PROFILE: Tuple[int, int, int, int] = (1, 1, 2, 2)


class MultiIndex(NamedTuple):
    """Derivative orders (i1, i2, i3, i4) with i1, i2 in {0,1} and i3, i4 in {0,1,2}"""
    i1: int
    i2: int
    i3: int
    i4: int

    @classmethod
    def of(cls, *orders) -> "MultiIndex":
        """Validated construction from four ints, a 4-sequence or a string like "1,0,2,2" """
        if len(orders) == 1:
            raw = orders[0]
            if isinstance(raw, str):
                raw = [int(tok) for tok in re.split(r"[\s,_]+", raw.strip()) if tok]
            orders = tuple(raw)
        if len(orders) != 4:
            raise ValueError(f"A multi-index has four components, got {orders}")
        index = cls(*(int(i) for i in orders))
        for i, m in zip(index, ORDER_PROFILE):
            if not 0 <= i <= m:
                raise ValueError(f"Multi-index {tuple(index)} outside the order profile {ORDER_PROFILE}")
        return index

    @property
    def is_dominant(self) -> bool:
        return tuple(self) == ORDER_PROFILE

    @property
    def free_axes(self) -> Tuple[int, ...]:
        """Axes on which the trace of this index varies (i_k = m_k)"""
        return tuple(k for k, (i, m) in enumerate(zip(self, ORDER_PROFILE), start=1) if i == m)

    @property
    def fixed_axes(self) -> Tuple[int, ...]:
        """Axes set to 0 when taking the trace (i_k < m_k)"""
        return tuple(k for k, (i, m) in enumerate(zip(self, ORDER_PROFILE), start=1) if i < m)

    def label(self) -> str:
        return ",".join(str(i) for i in self)

    def __str__(self) -> str:
        return f"({self.label()})"


DOMINANT = MultiIndex(*ORDER_PROFILE)

# Ordered by trace dimension, then lexicographically; the dominant index is last.
ALL_INDICES: Tuple[MultiIndex, ...] = tuple(sorted(
    (MultiIndex(*orders) for orders in product(range(2), range(2), range(3), range(3))),
    key=lambda index: (len(index.free_axes), tuple(index)),
))
BOUNDARY_INDICES: Tuple[MultiIndex, ...] = tuple(i for i in ALL_INDICES if not i.is_dominant)

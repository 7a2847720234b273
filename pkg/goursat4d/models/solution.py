"""Solutions of the Goursat problem"""
from dataclasses import dataclass

from goursat4d.core.grid import Field, Grid4
from goursat4d.models.evector import EVector


@dataclass(frozen=True)
class Solution:
    """u, its dominant derivative b = D1 D2 D3^2 D4^2 u, and the data it was solved from"""
    u: Field
    b: Field
    phi: EVector

    def __post_init__(self):
        if self.u.grid != self.b.grid:
            raise ValueError("u and b must live on the same grid")

    @property
    def grid(self) -> Grid4:
        return self.u.grid

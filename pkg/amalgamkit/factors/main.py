from enum import Enum, auto
from typing import Type

from . import FactorGroup
from .finite import FiniteGroup
from .free import FreeGroup


class FactorKind(Enum):
    FREE = auto()
    FINITE = auto()

    @property
    def factor(self) -> Type[FactorGroup]:
        match self:
            case FactorKind.FREE:
                return FreeGroup
            case FactorKind.FINITE:
                return FiniteGroup

    @staticmethod
    def get(name: str) -> "FactorKind":
        for kind in FactorKind:
            if kind.name.lower() == name.strip().lower():
                return kind
        raise ValueError(f"Factor kind not found : {name}")

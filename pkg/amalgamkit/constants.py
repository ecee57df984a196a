from __future__ import annotations

from enum import Enum, IntEnum
from typing import NamedTuple


class Side(IntEnum):
    PLUS = 1
    MINUS = -1

    @property
    def other(self) -> "Side":
        return Side.MINUS if self is Side.PLUS else Side.PLUS

    @property
    def label(self) -> str:
        match self:
            case Side.PLUS:
                return "1"
            case Side.MINUS:
                return "-1"

    @staticmethod
    def get(name: str | int) -> "Side":
        for side in Side:
            if str(name).strip().lower() in (side.label, side.name.lower()):
                return side
        raise ValueError(f"Side not found : {name}")


class Comparison(Enum):
    LT = -1
    EQ = 0
    GT = 1


class CosetSide(Enum):
    LEFT = "left"
    RIGHT = "right"


class Strategy(Enum):
    LEFT_TO_RIGHT = "ltr"
    RIGHT_TO_LEFT = "rtl"

    @staticmethod
    def get(name: str) -> "Strategy":
        for strategy in Strategy:
            if name.lower() in (strategy.value, strategy.name.lower()):
                return strategy
        raise ValueError(f"Strategy not found : {name}")


class Verdict(Enum):
    STRUCTURAL = "qc-certified-structural"
    EMPIRICAL = "qc-evidence-empirical"
    INCONCLUSIVE = "inconclusive"


class ExitCode(IntEnum):
    OK = 0
    FAILURE = 1
    VALIDATION = 2
    INCONCLUSIVE = 3
    LAW_FAILURE = 4


class LawStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_EXERCISED = "not exercised"


class Budgets(NamedTuple):
    hball: int
    depth: int
    radius: int
    memory: int

    def describe(self) -> str:
        return f"hball={self.hball} depth={self.depth} radius={self.radius} memory={self.memory}"


DEFAULT_BUDGETS = Budgets(hball=5, depth=4, radius=6, memory=2_000_000)

REPORT_HEADER = (
    "Budgets cannot prove a negative: the laboratory reports certified or empirical "
    "quasiconvexity evidence, or inconclusive, never non-quasiconvexity."
)

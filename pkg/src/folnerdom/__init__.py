"""folnerdom: exact-arithmetic certificates for ergodic-average dominance
on discrete amenable groups (Z^d, discrete Heisenberg, lamplighter)."""

from .actions import FiniteAction, Observable
from .chains import Chain, build_chain, lamplighter_folner
from .dominance import DominanceReport, dominance_report
from .groups import Group, Heisenberg, Lamplighter, Zd
from .measures import FinSupMeasure
from .schedules import Schedule, SymbolicSize
from .sets import FiniteSubset

__all__ = [
    "Chain",
    "DominanceReport",
    "FiniteAction",
    "FiniteSubset",
    "FinSupMeasure",
    "Group",
    "Heisenberg",
    "Lamplighter",
    "Observable",
    "Schedule",
    "SymbolicSize",
    "Zd",
    "build_chain",
    "dominance_report",
    "lamplighter_folner",
]

__version__ = "0.1.0"

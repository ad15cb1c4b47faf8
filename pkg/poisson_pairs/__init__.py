"""Poisson pairs - exact flatness, genericity and constructions for bi-Hamiltonian structures."""

__version__ = "1.0.0"

from .config import Config
from .pencil import Pencil
from .workbench import Workbench

__all__ = ["Config", "Pencil", "Workbench"]

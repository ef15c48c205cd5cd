"""Analysis and simulation of a discrete phytoplankton-zooplankton map with toxin liberation."""
from plankton_dynamics.analysis.model import BaseParams, ModelParams, PlanktonState

__version__ = '1.0.0'

__all__ = ['BaseParams', 'ModelParams', 'PlanktonState', '__version__']

"""
Command-line front-end.
"""
from .commands import run, build_parser, EXIT_OK, EXIT_FAILURE, EXIT_NEGATIVE
from .settings import ExperimentConfig, SCHEMA

# commands/__init__.py
"""Subcomandos de la CLI: cada módulo expone register(subparsers) y run_command(args)."""
from commands import census, checks, procfns, quantum, reproduce, robustness, runs, witness

COMMAND_MODULES = [census, checks, robustness, witness, quantum, procfns, reproduce, runs]

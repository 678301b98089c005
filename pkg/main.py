# main.py
"""
Punto de entrada de la CLI del toolkit de antinomia causal.

    python main.py census --scenario 2,2,2
    python main.py witness eval --name gynin --input bfw.json
    python main.py reproduce-paper --section 4
"""
import argparse
import logging
import sys
from typing import List, Optional

import config
from commands import COMMAND_MODULES
from controllers import command_controller
from controllers.command_controller import EXIT_BAD_INPUT
from controllers.db import close_all_connections, initialize_database

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    if config.DEBUG:
        fmt = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        level = logging.DEBUG
    else:
        fmt = "%(asctime)s - %(levelname)s - %(message)s"
        level = getattr(logging, config.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format=fmt, stream=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="antinomy", description=config.APP_NAME)
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMAND_MODULES:
        module.register(subparsers)
    return parser


def dispatch(argv: Optional[List[str]] = None) -> int:
    """
    Analiza argv, ejecuta el subcomando y devuelve el código de salida.

    Returns:
        int: 0 éxito, 1 análisis infactible, 2 entrada inválida
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_BAD_INPUT if e.code else 0
    if config.DEBUG:
        config.log_config_info()
    if not args.no_store and not initialize_database():
        logger.warning("⚠️ Results store unavailable; the run will not be recorded")
        args.no_store = True
    try:
        return command_controller.execute(args.command, args, args.handler)
    finally:
        close_all_connections()


def main() -> None:
    configure_logging()
    sys.exit(dispatch())


if __name__ == "__main__":
    main()

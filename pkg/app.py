#!/usr/bin/env python3
"""
Extkit Command Line
===================
Classification of non-abelian extensions of finite groups: kernels,
characteristic classes, factor systems, crossed modules and automorphisms
of extensions.

This is the main entry point that loads configuration and dispatches
subcommands. Exit codes: 0 success, 2 validation failure, 3 bound exceeded.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv

from algebra.errors import BoundExceeded, ExtkitError
from aut_cache import AutCache
from extkit_config import ExtkitConfig
from reports import render, render_error
from routes import register_commands

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BOUND = 3


class Session:
    """Settings and shared state for one invocation"""

    def __init__(self):
        self.config: Optional[ExtkitConfig] = None
        self.cache: Optional[AutCache] = None

    def configure(self, args) -> None:
        """
        Resolve settings from flags, environment and the XML file.

        Args:
            args: Parsed top-level arguments
        """
        self.config = ExtkitConfig(args.config or 'extkit.xml', create=False)
        self.config.override('max_order', args.max_order)
        self.config.override('budget', args.budget)
        self.config.override('seed', args.seed)
        self.config.override('cache_dir', args.cache_dir)
        cache_dir = None if args.no_cache else self.config.cache_dir
        self.cache = AutCache(cache_dir, self.config.cache_days)

    @property
    def max_order(self) -> int:
        return self.config.max_order

    @property
    def budget(self) -> int:
        return self.config.budget

    @property
    def seed(self) -> int:
        return self.config.seed

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def build_parser(session: Session) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='extkit', description='Non-abelian extensions of finite groups')
    parser.add_argument('--json', action='store_true', help='machine-readable output')
    parser.add_argument('--timing', action='store_true', help='include timing in JSON output')
    parser.add_argument('--budget', type=int, help='brute-force search budget')
    parser.add_argument('--max-order', type=int, help='largest group order accepted')
    parser.add_argument('--seed', type=int, help='seed for randomized consistency checks')
    parser.add_argument('--cache-dir', help='directory for cached Aut enumerations')
    parser.add_argument('--no-cache', action='store_true', help='keep the Aut cache in memory only')
    parser.add_argument('--config', help='XML settings file (default extkit.xml)')
    parser.add_argument('--verbose', '-v', action='store_true', help='debug logging')
    subparsers = parser.add_subparsers(dest='command', required=True)
    register_commands(subparsers, session)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the application"""
    load_dotenv()
    session = Session()
    parser = build_parser(session)
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )

    started = time.perf_counter()
    try:
        session.configure(args)
        report = args.handler(args)
    except BoundExceeded as exc:
        print(render_error(exc.to_dict(), args.json))
        return EXIT_BOUND
    except ExtkitError as exc:
        print(render_error(exc.to_dict(), args.json))
        return EXIT_INVALID
    except OSError as exc:
        body = {'error': type(exc).__name__, 'message': str(exc)}
        if getattr(exc, 'filename', None):
            body['path'] = str(Path(exc.filename))
        print(render_error(body, args.json))
        return EXIT_INVALID

    report.provenance.setdefault('seed', session.seed)
    report.timing['total'] = round(time.perf_counter() - started, 6)
    print(render(report, args.json, args.timing))
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())

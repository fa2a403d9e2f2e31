#!/usr/bin/env python3
"""
Point d'entrée de la commande `euler`

Statuts de sortie : 0 succès, 1 assertion non certifiée, 2 erreur de
syntaxe, 3 échec de construction.
"""

import logging
import sys
from pathlib import Path

import click

from . import __version__, config, setup_logging
from .cli.colors import Colors
from .cli.session import Session, SessionFlags, check
from .exceptions import EulerError

logger = logging.getLogger(__name__)


class EulerApp:
    """Application : configuration, logging, puis exécution d'une session"""

    def __init__(self, seed=None, degree_cap=None, attempts=None, witnesses=None,
                 order=None, verbose=False, no_color=False):
        if no_color:
            config.set('colors', False)
        if not config.get('colors', True):
            Colors.disable()
        if verbose:
            config.set('log_level', 'DEBUG')
        setup_logging(level=config.get('log_level', 'WARNING'), log_file=config.get('log_file'))

        self.flags = SessionFlags.from_config(
            config, seed=seed, degree_cap=degree_cap, attempt_cap=attempts,
            witnesses=witnesses or None, order=order)
        logger.info(f"euler v{__version__} ready (seed {self.flags.seed})")

    @staticmethod
    def report(error: EulerError):
        """Erreur sur stderr, avec l'instruction d'origine quand elle est connue"""
        statement = getattr(error, 'statement', None)
        line = getattr(error, 'line', None)
        if statement and line is not None:
            click.echo(Colors.error(f"line {line}: {statement}"), err=True)
        click.echo(Colors.error(f"Error: {error}"), err=True)

    def run_file(self, path: str) -> int:
        text = Path(path).read_text(encoding='utf-8')
        session = Session(self.flags)
        try:
            session.run(text, click.echo)
        except EulerError as e:
            self.report(e)
            return e.exit_status
        return 0

    def check_file(self, path: str) -> int:
        text = Path(path).read_text(encoding='utf-8')
        try:
            statements = check(text)
        except EulerError as e:
            self.report(e)
            return e.exit_status
        click.echo(f"{path}: {len(statements)} statements")
        return 0

    def run_shell(self):
        from .cli.shell import EulerShell
        shell = EulerShell(self.flags)
        try:
            shell.cmdloop()
        except KeyboardInterrupt:
            click.echo("\n" + Colors.info("Interrupted"))
        return 0


def session_options(function):
    """Options communes à run et repl"""
    options = [
        click.option('--seed', type=int, default=None, help='Seed of every randomized search (default: EULER_SEED or 0)'),
        click.option('--degree-cap', type=int, default=None, help='Maximal degree of random perturbations'),
        click.option('--attempts', type=int, default=None, help='Attempt cap of randomized searches'),
        click.option('--witnesses', is_flag=True, default=False, help='Echo every witness in the transcript'),
        click.option('--order', type=click.Choice(['degrevlex', 'lex']), default=None,
                     help='Monomial order of rings declared without one'),
        click.option('-v', '--verbose', is_flag=True, default=False, help='Debug logging on stderr'),
        click.option('--no-color', is_flag=True, default=False, help='Disable colored output'),
    ]
    for option in reversed(options):
        function = option(function)
    return function


@click.group()
@click.version_option(__version__, prog_name='euler')
def main():
    """Euler class groups and cohomotopy of finitely presented rings."""


@main.command()
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@session_options
def run(file, **options):
    """Run a session file and print its transcript."""
    sys.exit(EulerApp(**options).run_file(file))


@main.command()
@session_options
def repl(**options):
    """Start the interactive shell."""
    sys.exit(EulerApp(**options).run_shell())


@main.command(name='check')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--no-color', is_flag=True, default=False, help='Disable colored output')
def check_command(file, no_color):
    """Parse a session file without executing it."""
    sys.exit(EulerApp(no_color=no_color).check_file(file))


# ==================== ENTRY POINT ====================

if __name__ == "__main__":
    main()

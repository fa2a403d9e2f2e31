#!/usr/bin/env python3
"""
REPL interactif : une instruction par ligne, commandes .names et .ledger
"""

import atexit
import cmd
import logging
import sys
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.table import Table

from .. import config
from ..exceptions import EulerError
from .colors import Colors
from .commands import CommandRegistry
from .parser import split_statements, parse_statement
from .session import Session, SessionFlags

try:
    import readline
except ImportError:  # Windows sans pyreadline
    readline = None

logger = logging.getLogger(__name__)


def describe(value) -> str:
    """Type lisible d'une valeur de l'espace de noms"""
    return {
        'PresentedRing': 'ring',
        'IdealHandle': 'ideal',
        'QuadricPoint': 'point',
        'UnimodularRow': 'row',
        'EulerSymbol': 'symbol',
        'Witness': 'relation',
        'WeakClass': 'weak class',
        'FoldMap': 'fold map',
        'SpacePresentation': 'device',
    }.get(type(value).__name__, type(value).__name__)


class EulerShell(cmd.Cmd):
    """Shell interactif"""

    intro = Colors.info("euler interactive shell") + "\n" + Colors.dim("Type 'help' for commands, 'exit' to quit")
    prompt = 'euler> '

    def __init__(self, flags: Optional[SessionFlags] = None, stdout=None):
        super().__init__(stdout=stdout)
        self.session = Session(flags)
        self.console = Console(file=self.stdout, highlight=False)
        if config.get('colors', True):
            self.prompt = Colors.colorize('euler> ', Colors.PROMPT)
        shell_config = config.get('shell', {})
        self.history_file = Path(config.get('base_dir')) / shell_config.get('history_file', '.euler_history')
        self._setup_history(shell_config.get('max_history', 1000))

    def _setup_history(self, max_history: int):
        if readline is None:
            return
        try:
            readline.read_history_file(str(self.history_file))
        except (FileNotFoundError, OSError):
            pass
        readline.set_history_length(max_history)
        atexit.register(self._write_history)

    def _write_history(self):
        try:
            self.history_file.parent.mkdir(parents=True, exist_ok=True)
            readline.write_history_file(str(self.history_file))
        except OSError as e:
            logger.warning(f"Could not write history: {e}")

    # ==================== STATEMENTS ====================

    def default(self, line: str):
        if line.startswith('.'):
            self._handle_dot_command(line)
            return
        self.execute(line)

    def execute(self, text: str):
        for piece, line, _ in split_statements(text):
            try:
                statement = parse_statement(piece, line)
                for output in self.session.execute_statement(statement):
                    self.stdout.write(output + '\n')
            except EulerError as e:
                sys.stderr.write(Colors.error(f"Error: {e}") + '\n')
                return

    def _handle_dot_command(self, command: str):
        name = command[1:].strip().lower()
        if name == 'names':
            self._show_names()
        elif name == 'ledger':
            self._show_ledger()
        else:
            sys.stderr.write(Colors.warning(f"Unknown dot command: .{name}") + '\n')

    def _show_names(self):
        table = Table(title="Names")
        table.add_column("Name")
        table.add_column("Kind")
        table.add_column("Value")
        for name, value in self.session.namespace.items():
            table.add_row(name, describe(value), str(value))
        self.console.print(table)

    def _show_ledger(self):
        table = Table(title=f"Ledger ({len(self.session.ledger)} witnesses)")
        table.add_column("#", justify="right")
        table.add_column("Kind")
        table.add_column("From")
        table.add_column("To")
        table.add_column("Note")
        for index, witness in enumerate(self.session.ledger, 1):
            table.add_row(str(index), witness.kind, str(witness.source), str(witness.target), witness.note)
        self.console.print(table)

    # ==================== BUILT-IN COMMANDS ====================

    def do_help(self, arg: str):
        """Affiche l'aide"""
        verbs = ', '.join(CommandRegistry().verbs())
        help_text = f"""
Declarations:
  ring A = QQ[x, y] / (x^2 + y^2 - 1);
  ideal I = (x, y) in A;
  point v : Q4(A) = ([x, y], [0, 0], 0);
  row r = (x, y, 1) in A;

Commands: {verbs}
  compose h = v * w;   euler-reduce E = O1 - O2;   relation R = lift O;

Assertions:
  assert equal v w;   assert valid v;   assert ideal v = I;

Shell:
  .names  .ledger  save FILE  history  exit
"""
        self.stdout.write(help_text.strip() + '\n')

    def do_save(self, arg: str):
        """Enregistre les instructions acceptées comme fichier de session"""
        path = arg.strip()
        if not path:
            sys.stderr.write(Colors.warning("Usage: save FILE") + '\n')
            return
        try:
            Path(path).write_text(''.join(s + '\n' for s in self.session.accepted), encoding='utf-8')
        except OSError as e:
            sys.stderr.write(Colors.error(f"Could not save session: {e}") + '\n')
            return
        self.stdout.write(f"saved {len(self.session.accepted)} statements to {path}\n")

    def do_history(self, arg: str):
        """Affiche l'historique"""
        if readline is None:
            return
        for i in range(1, readline.get_current_history_length() + 1):
            self.stdout.write(f"{i:4}  {readline.get_history_item(i)}\n")

    def do_exit(self, arg: str):
        """Quitte le shell"""
        self.stdout.write("Goodbye!\n")
        return True

    def do_quit(self, arg: str):
        """Quitte le shell"""
        return self.do_exit(arg)

    def do_EOF(self, arg: str):
        self.stdout.write('\n')
        return True

    def emptyline(self):
        pass

    # Les instructions ne doivent pas être prises pour des commandes cmd
    def onecmd(self, line: str):
        head = line.strip().split(' ', 1)[0] if line.strip() else ''
        if head in ('help', 'save', 'history', 'exit', 'quit', 'EOF'):
            return super().onecmd(line)
        if not line.strip():
            return self.emptyline()
        return self.default(line.strip())

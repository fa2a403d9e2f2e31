"""
Interface textuelle : grammaire des instructions, sessions, REPL
"""

from .parser import parse_statement, print_statement, parse_session
from .session import Session, SessionFlags, execute

__all__ = ['parse_statement', 'print_statement', 'parse_session', 'Session', 'SessionFlags', 'execute']

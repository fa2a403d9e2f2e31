#!/usr/bin/env python3
"""
Couleurs pour stderr et le REPL ; jamais dans les transcriptions
"""

try:
    from colorama import init, Fore, Style
    init()

    RED = Fore.RED
    GREEN = Fore.GREEN
    YELLOW = Fore.YELLOW
    BLUE = Fore.BLUE
    MAGENTA = Fore.MAGENTA
    CYAN = Fore.CYAN
    WHITE = Fore.WHITE

    BRIGHT = Style.BRIGHT
    DIM = Style.DIM
    RESET = Style.RESET_ALL

    COLORAMA_AVAILABLE = True

except ImportError:
    # Fallback sans colorama
    RED = GREEN = YELLOW = BLUE = MAGENTA = CYAN = WHITE = ''
    BRIGHT = DIM = RESET = ''
    COLORAMA_AVAILABLE = False


class Colors:
    """Palette de la CLI"""

    enabled = True

    TITLE = f"{BRIGHT}{CYAN}"
    PROMPT = f"{BRIGHT}{GREEN}"

    SUCCESS = f"{BRIGHT}{GREEN}"
    ERROR = f"{BRIGHT}{RED}"
    WARNING = f"{BRIGHT}{YELLOW}"
    INFO = f"{BRIGHT}{CYAN}"
    HELP = f"{DIM}{WHITE}"

    KEYWORD = f"{BRIGHT}{YELLOW}"
    VERB = f"{BRIGHT}{MAGENTA}"
    WITNESS = f"{DIM}{WHITE}"

    @classmethod
    def disable(cls):
        cls.enabled = False

    @classmethod
    def colorize(cls, text: str, color: str) -> str:
        if not cls.enabled or not COLORAMA_AVAILABLE:
            return text
        return f"{color}{text}{RESET}"

    @classmethod
    def success(cls, text: str) -> str:
        return cls.colorize(text, cls.SUCCESS)

    @classmethod
    def error(cls, text: str) -> str:
        return cls.colorize(text, cls.ERROR)

    @classmethod
    def warning(cls, text: str) -> str:
        return cls.colorize(text, cls.WARNING)

    @classmethod
    def info(cls, text: str) -> str:
        return cls.colorize(text, cls.INFO)

    @classmethod
    def dim(cls, text: str) -> str:
        return cls.colorize(text, cls.WITNESS)

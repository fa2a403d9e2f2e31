#!/usr/bin/env python3
"""
eulerclass - Calcul formel sur les anneaux de présentation finie :
points de quadriques, classes de Segre, groupe de cohomotopie et groupe
d'Euler, avec une CLI de sessions rejouables.
"""

import os
import sys
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

# ==================== VERSION & METADATA ====================

__version__ = "0.4.0"
__author__ = "Eulerclass contributors"
__license__ = "MIT"
__description__ = "Euler class groups and cohomotopy of commutative rings, computed with Groebner bases"

PACKAGE_NAME = "eulerclass"
BASE_DIR = Path(__file__).parent

DEFAULT_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# ==================== LOGGING CONFIGURATION ====================


def setup_logging(
    level: Union[int, str] = logging.WARNING,
    log_file: Optional[str] = None,
    format_string: Optional[str] = None
) -> logging.Logger:
    """
    Configure le logging du paquet

    Les handlers écrivent sur stderr : la sortie standard est réservée aux
    transcriptions, qui doivent rester identiques octet pour octet.

    Args:
        level: Niveau de log (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Chemin vers le fichier de log (optionnel)
        format_string: Format personnalisé pour les logs

    Returns:
        logging.Logger: Logger du paquet
    """
    if format_string is None:
        format_string = DEFAULT_LOG_FORMAT

    handlers = [logging.StreamHandler(sys.stderr)]

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path))

    package_logger = logging.getLogger(PACKAGE_NAME)
    package_logger.handlers.clear()
    formatter = logging.Formatter(format_string)
    for handler in handlers:
        handler.setFormatter(formatter)
        package_logger.addHandler(handler)
    package_logger.setLevel(level)
    package_logger.propagate = False
    return package_logger


logger = logging.getLogger(PACKAGE_NAME)
logger.addHandler(logging.NullHandler())

# ==================== CONFIGURATION ====================


class EulerConfig:
    """Configuration globale"""

    _instance = None
    _config = {
        'base_dir': Path.home() / '.euler',
        'seed': 0,
        'degree_cap': 2,
        'attempt_cap': 60,
        'witnesses': False,
        'order': 'degrevlex',
        'colors': True,
        'log_level': 'WARNING',
        'log_file': None,
        'shell': {
            'history_file': '.euler_history',
            'max_history': 1000,
        },
    }

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._config = EulerConfig._config.copy()
            cls._instance._load_config()
        return cls._instance

    def _load_config(self):
        """Charge config.json puis la graine de EULER_SEED"""
        config_file = Path(self._config['base_dir']) / 'config.json'
        if config_file.exists():
            try:
                with open(config_file, 'r') as f:
                    user_config = json.load(f)
                self._config.update(user_config)
                logger.info(f"Configuration loaded from {config_file}")
            except (OSError, ValueError) as e:
                logger.warning(f"Could not load config file: {e}")

        env_seed = os.environ.get('EULER_SEED')
        if env_seed is not None:
            try:
                self._config['seed'] = int(env_seed)
            except ValueError:
                logger.warning(f"Ignoring non-integer EULER_SEED={env_seed!r}")

    def save(self):
        """Sauvegarde la configuration dans le fichier"""
        config_file = Path(self._config['base_dir']) / 'config.json'
        try:
            config_file.parent.mkdir(parents=True, exist_ok=True)
            with open(config_file, 'w') as f:
                json.dump(self._config, f, indent=2, default=str)
            logger.debug(f"Configuration saved to {config_file}")
        except OSError as e:
            logger.error(f"Could not save config file: {e}")

    def get(self, key: str, default=None):
        return self._config.get(key, default)

    def set(self, key: str, value: Any):
        self._config[key] = value
        logger.debug(f"Config updated: {key} = {value}")

    def update(self, **kwargs):
        """Met à jour plusieurs valeurs ; les None sont ignorés (options CLI absentes)"""
        values = {k: v for k, v in kwargs.items() if v is not None}
        self._config.update(values)
        logger.debug(f"Config updated with: {values}")

    def reset(self):
        """Réinitialise la configuration aux valeurs par défaut"""
        self._config = EulerConfig._config.copy()
        logger.info("Configuration reset to defaults")

    def to_dict(self) -> Dict[str, Any]:
        return self._config.copy()


# Instance globale de configuration
config = EulerConfig()

# ==================== UTILITY FUNCTIONS ====================


def get_version() -> str:
    return __version__


# ==================== PUBLIC API ====================

from .exceptions import (  # noqa: E402
    EulerError, ParseError, NameResolutionError, DuplicateVariable, CharacteristicTwo,
    NonPrimeCharacteristic, UnknownField, UnknownOrder, UnknownCommand,
    UnknownVariable, RingMismatch, NotMember, NotComaximal, NotZeroDimensional,
    ArityMismatch, EquationViolated, UnsupportedN, NotOriented, NotCompleteIntersection,
    HeightViolation, RangeViolation, MoveFailed, ConstructionFailed, AssertionFailedError,
)
from .ring import CoefficientField, PresentedRing, RingElement, make_ring, normal_form, substitute  # noqa: E402
from .groebner import (  # noqa: E402
    IdealHandle, groebner_basis, contains, ideal_algebra, express, comaximal_witness,
    dimension_height, vector_space_dimension,
)
from .quadric import (  # noqa: E402
    QuadricPoint, HomotopyPoint, validate, vanishing_ideal, jouanolou_device, fold_map,
    base_point, homotopy,
)
from .segre import OrientedIdeal, check_orientation, idempotent_lift, segre_class  # noqa: E402
from .cohomotopy import (  # noqa: E402
    CohomotopyClass, Ledger, MoveConstraints, move, compose, inverse, provably_equal,
)
from .euler import (  # noqa: E402
    EulerSymbol, EulerSum, UnimodularRow, ElementaryWord, relation_witness, split_merge,
    moving_euler, reduce_to_single, segre_hom, weak_class, phi,
)

__all__ = [
    '__version__', 'setup_logging', 'config', 'EulerConfig', 'get_version',
    'EulerError', 'ParseError', 'NameResolutionError', 'DuplicateVariable', 'CharacteristicTwo',
    'NonPrimeCharacteristic', 'UnknownField', 'UnknownOrder', 'UnknownCommand',
    'UnknownVariable', 'RingMismatch', 'NotMember', 'NotComaximal', 'NotZeroDimensional',
    'ArityMismatch', 'EquationViolated', 'UnsupportedN', 'NotOriented', 'NotCompleteIntersection',
    'HeightViolation', 'RangeViolation', 'MoveFailed', 'ConstructionFailed', 'AssertionFailedError',
    'CoefficientField', 'PresentedRing', 'RingElement', 'make_ring', 'normal_form', 'substitute',
    'IdealHandle', 'groebner_basis', 'contains', 'ideal_algebra', 'express', 'comaximal_witness',
    'dimension_height', 'vector_space_dimension',
    'QuadricPoint', 'HomotopyPoint', 'validate', 'vanishing_ideal', 'jouanolou_device', 'fold_map',
    'base_point', 'homotopy',
    'OrientedIdeal', 'check_orientation', 'idempotent_lift', 'segre_class',
    'CohomotopyClass', 'Ledger', 'MoveConstraints', 'move', 'compose', 'inverse', 'provably_equal',
    'EulerSymbol', 'EulerSum', 'UnimodularRow', 'ElementaryWord', 'relation_witness', 'split_merge',
    'moving_euler', 'reduce_to_single', 'segre_hom', 'weak_class', 'phi',
]

"""
eulerclass - Setup avec détection automatique de version et de dépendances
"""

import os
import re
import sys
from typing import Dict, List, Optional

# ============================================================================
# CONFIGURATION GÉNÉRALE
# ============================================================================

PROJECT_NAME = "eulerclass"
DESCRIPTION = "Euler class groups and naive cohomotopy of finitely presented commutative rings"
KEYWORDS = [
    "algebra", "commutative-algebra", "groebner", "euler-class", "cohomotopy",
    "symbolic", "sympy", "cli",
]
PYTHON_REQUIRES = ">=3.9"

# ============================================================================
# GESTIONNAIRE DE VERSION AUTOMATIQUE
# ============================================================================


class VersionManager:
    """Récupère la version depuis le paquet"""

    def __init__(self):
        self.version_files = [
            "eulerclass/__init__.py",
        ]

    def get_version(self) -> str:
        for file_path in self.version_files:
            if os.path.exists(file_path):
                version = self._extract_from_file(file_path)
                if version:
                    print(f"📦 Version détectée ({file_path}): {version}")
                    return version
        default_version = "0.1.0"
        print(f"📦 Version par défaut: {default_version}")
        return default_version

    def _extract_from_file(self, file_path: str) -> Optional[str]:
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                content = f.read()
        except OSError:
            return None
        match = re.search(r'__version__\s*=\s*[\'"]([^\'"]+)[\'"]', content)
        return match.group(1) if match else None

# ============================================================================
# LECTURE DES DÉPENDANCES
# ============================================================================


def get_requirements() -> List[str]:
    """Lit les dépendances depuis requirements.txt"""
    requirements = []
    if os.path.exists("requirements.txt"):
        with open("requirements.txt", 'r', encoding='utf-8') as f:
            for line in f:
                line = line.strip()
                if line and not line.startswith('#'):
                    requirements.append(line)

    if not requirements:
        requirements = [
            'sympy>=1.13',
            'click>=8.0',
            'colorama',
            'rich',
        ]
    return requirements

# ============================================================================
# POINTS D'ENTRÉE
# ============================================================================


def find_entry_points() -> Dict[str, List[str]]:
    return {
        'console_scripts': [
            'euler=eulerclass.__main__:main',
        ]
    }

# ============================================================================
# VÉRIFICATION PRÉ-SETUP
# ============================================================================


def pre_setup_checks() -> bool:
    print("=" * 60)
    print("🚀 PRÉPARATION DE LA CONSTRUCTION EULERCLASS")
    print("=" * 60)
    if not os.path.exists("eulerclass"):
        print("❌ Dossier requis manquant: eulerclass")
        return False
    if not os.path.exists("README.md"):
        print("⚠️  Fichier critique manquant: README.md")
    print("\n✅ Vérifications terminées avec succès")
    return True

# ============================================================================
# SETUP PRINCIPAL
# ============================================================================

from setuptools import setup, find_packages


def main():
    if not pre_setup_checks():
        print("\n❌ Construction annulée. Corrigez les problèmes et réessayez.")
        sys.exit(1)

    version = VersionManager().get_version()

    long_description = ""
    if os.path.exists("README.md"):
        with open("README.md", 'r', encoding='utf-8') as f:
            long_description = f.read()

    setup(
        # === INFORMATIONS DE BASE ===
        name=PROJECT_NAME,
        version=version,
        description=DESCRIPTION,
        long_description=long_description,
        long_description_content_type="text/markdown",

        # === CLASSIFIERS ===
        classifiers=[
            "Development Status :: 3 - Alpha",
            "Intended Audience :: Science/Research",
            "Topic :: Scientific/Engineering :: Mathematics",
            "License :: OSI Approved :: MIT License",
            "Programming Language :: Python :: 3",
            "Programming Language :: Python :: 3.9",
            "Programming Language :: Python :: 3.10",
            "Programming Language :: Python :: 3.11",
            "Programming Language :: Python :: 3.12",
            "Operating System :: OS Independent",
        ],
        keywords=KEYWORDS,

        # === PACKAGES ===
        packages=find_packages(include=['eulerclass', 'eulerclass.*']),
        include_package_data=True,

        # === DÉPENDANCES ===
        install_requires=get_requirements(),
        python_requires=PYTHON_REQUIRES,
        extras_require={
            'dev': [
                'pytest>=7.0.0',
                'pytest-cov>=4.0.0',
                'hypothesis>=6.80',
            ],
            'test': [
                'pytest>=7.0.0',
                'hypothesis>=6.80',
            ],
            'docs': [
                'mkdocs>=1.5',
            ],
        },

        # === POINTS D'ENTRÉE ===
        entry_points=find_entry_points(),

        zip_safe=False,
        platforms=["any"],
        license="MIT",
    )

    print("\n" + "=" * 60)
    print(f"✅ SETUP TERMINÉ - eulerclass v{version} prêt pour la construction")
    print("=" * 60)

# ============================================================================
# EXÉCUTION
# ============================================================================


if __name__ == "__main__":
    if '--version' in sys.argv:
        print(f"eulerclass version: {VersionManager().get_version()}")
        sys.exit(0)
    try:
        main()
    except KeyboardInterrupt:
        print("\n\n❌ Construction interrompue par l'utilisateur")
        sys.exit(1)

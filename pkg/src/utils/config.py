"""
Réglages lus depuis l'environnement (fichier .env via python-dotenv).

Les options de la ligne de commande priment sur ces valeurs.
"""

import logging
import os
from dataclasses import asdict, dataclass

from dotenv import load_dotenv

from src.exceptions import InvalidConfigError

logger = logging.getLogger("schwarz_monodromy.config")

MIN_CLOSURE_CAP = 1000
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    dmax: int = 120
    closure_cap: int = 1_000_000
    workers: int = 1
    seed: int = 20240229
    reports_dir: str = "reports"
    log_level: str = "INFO"
    log_to_file: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def _int_setting(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise InvalidConfigError(f"{name} doit être un entier (reçu {raw!r})") from e


def _bool_setting(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    value = raw.strip().lower()
    if value in ("1", "true", "yes", "oui", "on"):
        return True
    if value in ("0", "false", "no", "non", "off"):
        return False
    raise InvalidConfigError(f"{name} doit être un booléen (reçu {raw!r})")


def load_settings(env_file=None) -> Settings:
    """
    Charge .env (sans écraser l'environnement existant) puis construit les réglages.

    Raises:
        InvalidConfigError: valeur illisible ou hors bornes
    """
    load_dotenv(env_file, override=False)
    defaults = Settings()
    log_level = os.getenv("LOG_LEVEL", defaults.log_level).strip().upper()
    if log_level not in LOG_LEVELS:
        raise InvalidConfigError(f"LOG_LEVEL inconnu: {log_level!r}")

    settings = Settings(
        dmax=_int_setting("DMAX", defaults.dmax),
        closure_cap=_int_setting("CLOSURE_CAP", defaults.closure_cap),
        workers=_int_setting("WORKERS", defaults.workers),
        seed=_int_setting("SEED", defaults.seed),
        reports_dir=os.getenv("REPORTS_DIR", defaults.reports_dir).strip() or defaults.reports_dir,
        log_level=log_level,
        log_to_file=_bool_setting("LOG_TO_FILE", defaults.log_to_file),
    )
    validate_settings(settings)
    return settings


def validate_settings(settings: Settings) -> Settings:
    if settings.dmax < 2:
        raise InvalidConfigError(f"DMAX doit être >= 2 (reçu {settings.dmax})")
    if settings.closure_cap < MIN_CLOSURE_CAP:
        raise InvalidConfigError(f"CLOSURE_CAP doit être >= {MIN_CLOSURE_CAP} (reçu {settings.closure_cap})")
    if settings.workers < 1:
        raise InvalidConfigError(f"WORKERS doit être >= 1 (reçu {settings.workers})")
    return settings

"""
Module de gestion des logs pour l'outil de classification des monodromies finies.
Console sur stderr (stdout reste réservé aux rapports), fichier horodaté en option.
"""

import logging
import os
import sys
import traceback
from datetime import datetime
from pathlib import Path

LOGGER_NAME = "schwarz_monodromy"


class MonodromyLogger:
    """
    Gestionnaire de logs du projet.
    Les modules écrivent dans des loggers enfants "schwarz_monodromy.<module>".
    """

    def __init__(self, log_level=logging.INFO, log_to_file=False, logs_dir="logs"):
        """
        Initialise le gestionnaire de logs.

        Args:
            log_level: Niveau de logging (par défaut: INFO)
            log_to_file: Écrire aussi dans logs/YYYYMMDD_HHMMSS_schwarz_monodromy.log
            logs_dir: Dossier des fichiers de log
        """
        self.logger = logging.getLogger(LOGGER_NAME)
        self.logs_dir = Path(logs_dir)
        self.current_log_file = None
        self.configure(log_level, log_to_file)

    def configure(self, log_level=logging.INFO, log_to_file=False):
        """(Re)configure niveau et handlers; appelé au démarrage de la CLI une fois les réglages lus."""
        if isinstance(log_level, str):
            log_level = logging.getLevelName(log_level.upper())
        self.logger.setLevel(log_level)
        self.logger.propagate = False

        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

        formatter = logging.Formatter(
            "%(asctime)s - %(levelname)s - %(module)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        self.current_log_file = None
        if log_to_file:
            self.logs_dir.mkdir(exist_ok=True)
            self.current_log_file = self._create_log_file()
            file_handler = logging.FileHandler(self.current_log_file, encoding="utf-8")
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)
            self.logger.debug(f"Fichier de log: {self.current_log_file}")

    def _create_log_file(self):
        # Format: logs/YYYYMMDD_HHMMSS_schwarz_monodromy.log
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        return str(self.logs_dir / f"{timestamp}_{LOGGER_NAME}.log")

    def log_exception(self, e, context=""):
        """
        Enregistre une exception: message en ERROR, trace complète en DEBUG.

        Args:
            e: L'exception à enregistrer
            context: Contexte supplémentaire (optionnel)
        """
        error_msg = f"{context}: {e}" if context else str(e)
        self.logger.error(error_msg)
        self.logger.debug(f"Traceback complète: {traceback.format_exc()}")

    def log_stage_start(self, stage_name):
        self.logger.info(f"DÉBUT ÉTAPE: {stage_name} {'=' * 40}")

    def log_stage_end(self, stage_name, success=True):
        status = "RÉUSSIE" if success else "ÉCHOUÉE"
        self.logger.info(f"FIN ÉTAPE: {stage_name} - {status} {'=' * 40}")

    def log_data_stats(self, stats_dict):
        """
        Enregistre des statistiques d'énumération.

        Args:
            stats_dict: Dictionnaire de statistiques
        """
        self.logger.info("Statistiques:")
        for key, value in stats_dict.items():
            self.logger.info(f"  - {key}: {value}")

    def log_config_status(self, settings):
        """Enregistre les réglages effectifs et la présence du fichier .env."""
        self.logger.info("Vérification des configurations:")
        env_status = "OK" if os.path.isfile(".env") else "ABSENT"
        self.logger.info(f"  - Fichier .env: {env_status}")
        for key, value in settings.as_dict().items():
            self.logger.info(f"  - {key}: {value}")
        reports_status = "OK" if os.path.isdir(settings.reports_dir) else "ABSENT"
        self.logger.info(f"  - Dossier {settings.reports_dir}: {reports_status}")


# Instance singleton pour tout le projet
logger = MonodromyLogger()


def get_logger():
    """
    Returns:
        MonodromyLogger: Instance du logger
    """
    return logger

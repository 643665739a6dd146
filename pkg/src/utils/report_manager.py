"""
Gestion des rapports produits par la ligne de commande.

Chaque rapport est écrit de façon atomique (fichier temporaire puis os.replace)
et référencé dans un index central reports/index.json.
"""

import json
import logging
import os
import tempfile
from datetime import datetime

import pandas as pd

logger = logging.getLogger("schwarz_monodromy.report_manager")

SCHEMA_VERSION = 1


class ReportManager:
    """
    Gestionnaire des fichiers de rapport.

    Cette classe centralise:
    - l'écriture atomique des rapports (JSON, Markdown, CSV)
    - l'export CSV des tables via pandas
    - la tenue de l'index des rapports
    """

    def __init__(self, reports_dir="reports"):
        """
        Args:
            reports_dir: Dossier de l'index des rapports
        """
        self.reports_dir = reports_dir
        self.index_file = os.path.join(reports_dir, "index.json")
        self._index = None

    @property
    def index(self):
        if self._index is None:
            self._index = self._load_index()
        return self._index

    def _load_index(self):
        if os.path.exists(self.index_file):
            try:
                with open(self.index_file, "r", encoding="utf-8") as f:
                    return json.load(f)
            except json.JSONDecodeError:
                logger.warning("Fichier d'index corrompu, création d'un nouvel index")
        return {"last_updated": None, "reports": []}

    def _save_index(self):
        self.index["last_updated"] = datetime.now().isoformat(timespec="seconds")
        os.makedirs(self.reports_dir, exist_ok=True)
        self._atomic_write(self.index_file, json.dumps(self.index, indent=2, ensure_ascii=False) + "\n")

    @staticmethod
    def _atomic_write(path, text):
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix=os.path.basename(path))
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise

    def write_report(self, command, text, path, fmt):
        """
        Écrit un rapport et l'enregistre dans l'index.

        Args:
            command: Sous-commande à l'origine du rapport
            text: Contenu déjà mis en forme
            path: Chemin de destination
            fmt: Format (md, csv, json)

        Returns:
            str: Chemin écrit
        """
        self._atomic_write(path, text)
        self.index["reports"].append({
            "command": command,
            "path": os.path.relpath(path),
            "format": fmt,
            "created": datetime.now().isoformat(timespec="seconds"),
            "schema_version": SCHEMA_VERSION,
        })
        self._save_index()
        logger.info(f"Rapport {command} écrit dans {path}")
        return path

    def export_table_csv(self, name, frame: pd.DataFrame):
        """Exporte une table en CSV dans le dossier des rapports (nom stable, écrasé à chaque run)."""
        path = os.path.join(self.reports_dir, f"{name}.csv")
        return self.write_report(f"tables:{name}", frame.to_csv(index=False, lineterminator="\r\n"), path, "csv")

    def get_stats(self):
        reports = self.index["reports"]
        return {
            "total_reports": len(reports),
            "by_command": {c: sum(1 for r in reports if r["command"] == c) for c in sorted({r["command"] for r in reports})},
            "last_update": self.index["last_updated"],
        }

"""
Package d'utilitaires: logs, réglages et rapports.
"""

from .config import Settings, load_settings, validate_settings
from .logger import get_logger, logger
from .report_manager import SCHEMA_VERSION, ReportManager

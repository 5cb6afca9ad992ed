"""
Extkit Configuration
====================
Manages XML-based settings with environment overrides.

Precedence: command-line flag > environment > XML file > defaults.
"""

import logging
import os
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Dict, Optional

from algebra.errors import ValidationError

logger = logging.getLogger(__name__)

DEFAULTS: Dict[str, str] = {
    'max_order': '128',
    'budget': '1000000',
    'seed': '0',
    'cache_dir': '~/.cache/extkit',
    'cache_days': '20',
}

ENVIRONMENT = {
    'cache_dir': 'EXTKIT_CACHE',
    'max_order': 'EXTKIT_MAX_ORDER',
    'budget': 'EXTKIT_BUDGET',
    'seed': 'EXTKIT_SEED',
}


class ExtkitConfig:
    """Manages XML-based settings"""

    def __init__(self, config_file: str = 'extkit.xml', create: bool = True):
        """
        Initialize configuration.

        Args:
            config_file: Path to XML configuration file
            create: Write a default file when none exists
        """
        self.config_file = config_file
        self.create = create
        self.settings: Dict[str, str] = {}
        self.overrides: Dict[str, str] = {}
        self.load_config()

    def load_config(self):
        """Load settings from XML file, creating default if not exists"""
        self.settings = dict(DEFAULTS)
        if not os.path.exists(self.config_file):
            if not self.create:
                return
            self.create_default_config()

        tree = ET.parse(self.config_file)
        root = tree.getroot()

        for setting_elem in root.findall('setting'):
            name = setting_elem.get('name')
            if name not in DEFAULTS:
                logger.warning("ignoring unknown setting %r in %s", name, self.config_file)
                continue
            self.settings[name] = (setting_elem.text or '').strip()

    def create_default_config(self):
        """Create default XML configuration file"""
        root = ET.Element('settings')
        for name, value in DEFAULTS.items():
            setting = ET.SubElement(root, 'setting', name=name)
            setting.text = value

        tree = ET.ElementTree(root)
        tree.write(self.config_file, encoding='utf-8', xml_declaration=True)

    def override(self, name: str, value) -> None:
        """Record a command-line value; None leaves the setting alone."""
        if value is not None:
            self.overrides[name] = str(value)

    def get(self, name: str) -> Optional[str]:
        """
        Get a setting by name.

        Args:
            name: Setting identifier

        Returns:
            Setting value or None if not found
        """
        if name in self.overrides:
            return self.overrides[name]
        variable = ENVIRONMENT.get(name)
        if variable and os.environ.get(variable):
            return os.environ[variable]
        return self.settings.get(name)

    def get_int(self, name: str) -> int:
        value = self.get(name)
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ValidationError(f"setting {name!r} must be an integer, got {value!r}") from None

    @property
    def max_order(self) -> int:
        return self.get_int('max_order')

    @property
    def budget(self) -> int:
        return self.get_int('budget')

    @property
    def seed(self) -> int:
        return self.get_int('seed')

    @property
    def cache_days(self) -> int:
        return self.get_int('cache_days')

    @property
    def cache_dir(self) -> Path:
        return Path(self.get('cache_dir')).expanduser()

    def reload_config(self):
        """Reload configuration from disk"""
        self.settings = {}
        self.load_config()

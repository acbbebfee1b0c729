import json
import logging
import os

from config.constants import PRESET_DIR

logger = logging.getLogger(__name__)


class FileProcessor:
    @staticmethod
    def resolve_run_file(path):
        """Return path itself if it exists, else the matching preset name"""
        if os.path.isfile(path):
            return path
        candidates = [os.path.join(PRESET_DIR, path), os.path.join(PRESET_DIR, f"{path}.json")]
        for candidate in candidates:
            if os.path.isfile(candidate):
                logger.info(f"Using preset {candidate}")
                return candidate
        raise ValueError(f"Run file not found: {path}")

    @staticmethod
    def read_run_file(path):
        """Load a declarative JSON run file into a dict"""
        resolved = FileProcessor.resolve_run_file(path)
        try:
            with open(resolved, encoding="utf-8") as handle:
                data = json.load(handle)
        except json.JSONDecodeError as e:
            logger.error(f"Error parsing run file {resolved}: {str(e)}")
            raise ValueError(f"Run file {resolved} is not valid JSON: {str(e)}")
        if not isinstance(data, dict):
            raise ValueError(f"Run file {resolved} must hold a JSON object, got {type(data).__name__}")
        logger.info(f"Loaded run file {resolved}")
        return data

    @staticmethod
    def list_presets():
        if not os.path.isdir(PRESET_DIR):
            return []
        return sorted(name[:-5] for name in os.listdir(PRESET_DIR) if name.endswith(".json"))

    @staticmethod
    def write_text(path, text):
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)

import json
import logging
import math

import numpy as np
import pandas as pd

from config.constants import REPORT_SETTINGS
from utils.file_processing import FileProcessor

logger = logging.getLogger(__name__)


class ReportWriter:
    """CSV and JSON writers shared by every CLI command"""

    @staticmethod
    def frame_to_csv(frame):
        """Render a frame with the fixed float format used for golden files"""
        return frame.to_csv(
            index=False,
            float_format=REPORT_SETTINGS["float_format"],
            na_rep=REPORT_SETTINGS["na_rep"],
            lineterminator="\n",
        )

    @staticmethod
    def _jsonable(value):
        if isinstance(value, dict):
            return {str(key): ReportWriter._jsonable(item) for key, item in value.items()}
        if isinstance(value, (list, tuple)):
            return [ReportWriter._jsonable(item) for item in value]
        if isinstance(value, np.ndarray):
            return [ReportWriter._jsonable(item) for item in value.tolist()]
        if isinstance(value, (bool, np.bool_)):
            return bool(value)
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, (float, np.floating)):
            value = float(value)
            # JSON has no infinity; unresolved extremum times are reported as text
            if math.isinf(value):
                return "inf" if value > 0 else "-inf"
            if math.isnan(value):
                return None
            return value
        if hasattr(value, "value"):
            return value.value
        return value

    @staticmethod
    def payload_to_json(payload):
        document = {"schema_version": REPORT_SETTINGS["schema_version"]}
        document.update(ReportWriter._jsonable(payload))
        return json.dumps(document, indent=2) + "\n"

    @staticmethod
    def write_frame(frame, path=None):
        """Write a frame as CSV to path, or return the text when path is None"""
        text = ReportWriter.frame_to_csv(frame)
        if path is None:
            return text
        FileProcessor.write_text(path, text)
        logger.info(f"Wrote {len(frame)} rows to {path}")
        return text

    @staticmethod
    def write_payload(payload, path=None):
        text = ReportWriter.payload_to_json(payload)
        if path is None:
            return text
        FileProcessor.write_text(path, text)
        logger.info(f"Wrote report to {path}")
        return text

    @staticmethod
    def verification_summary(report):
        """One line per check, for the log"""
        lines = []
        for check in report.get("checks", []):
            status = "PASS" if check["passed"] else "FAIL"
            lines.append(
                f"{status} {check['suite']}/{check['case']} {check['observable']}: "
                f"{check['max_deviation']:.3e} (tolerance {check['tolerance']:.1e})"
            )
        verdict = "all checks passed" if report.get("passed") else "some checks failed"
        lines.append(f"Verification: {verdict}")
        return lines

    @staticmethod
    def checks_frame(report):
        return pd.DataFrame(report.get("checks", []))

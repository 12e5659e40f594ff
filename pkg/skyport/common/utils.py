import os
import json
import logging
import tempfile

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


def atomic_write_text(path: str, text: str) -> str:
    """
    Write text to `path` via a temp file in the same directory and an
    os.replace, so readers never see a half-written file.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path


def write_json(path: str, doc) -> str:
    text = doc if isinstance(doc, str) else json.dumps(doc, indent=2, sort_keys=False, allow_nan=False)
    if not text.endswith("\n"):
        text += "\n"
    return atomic_write_text(path, text)


def write_csv(path: str, df: pd.DataFrame, float_format: str | None = None) -> str:
    return atomic_write_text(path, df.to_csv(index=False, float_format=float_format, lineterminator="\n"))


def export_excel(section_data: dict[str, pd.DataFrame], path: str) -> str | None:
    """
    Write each DataFrame in section_data to its own sheet of `path`.
    Sheet names are cut to Excel's 31 characters; fully blank rows are dropped.
    """
    if not section_data:
        logger.warning(f"export_excel: no sheets for '{path}', skipping export.")
        return None

    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with pd.ExcelWriter(path, engine="openpyxl", mode="w") as writer:
        for sheet_name, df in section_data.items():
            cleaned = df.replace(r"^\s*$", np.nan, regex=True).dropna(how="all")
            cleaned.to_excel(writer, sheet_name=sheet_name[:31], index=False)
    logger.debug(f"export_excel: wrote {len(section_data)} sheets to {path}")
    return path

"""
Report Generator
================
Renders a Markdown summary of a run (crosscheck table, witness records or a
plain record table) from the Jinja2 templates next to this module.
"""

from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from gausscap import __version__
from gausscap.reports.records import Record, format_value

TEMPLATE_DIR = Path(__file__).parent / "templates"

TEMPLATES = {
    "crosscheck": "crosscheck.md.j2",
    "witness":    "witness.md.j2",
}
DEFAULT_TEMPLATE = "records.md.j2"


def _environment() -> Environment:
    env = Environment(
        loader=FileSystemLoader(str(TEMPLATE_DIR)),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["num"] = format_value
    env.filters["short"] = lambda v: f"{v:.4g}" if isinstance(v, float) else format_value(v)
    return env


class ReportGenerator:
    """Generates a Markdown report for one command run."""

    def __init__(
        self,
        command: str,
        records: Sequence[Record],
        settings: Optional[Dict[str, Any]] = None,
        summary: Optional[Dict[str, Any]] = None,
    ):
        self.command  = command
        self.records  = list(records)
        self.settings = dict(settings or {})
        self.summary  = dict(summary or {})

    def generate_markdown(self, generated: Optional[str] = None) -> str:
        template = _environment().get_template(TEMPLATES.get(self.command, DEFAULT_TEMPLATE))
        columns = list(self.records[0]) if self.records else []
        return template.render(
            command=self.command,
            records=self.records,
            columns=columns,
            settings=self.settings,
            summary=self.summary,
            version=__version__,
            generated=generated or datetime.now().strftime("%B %d, %Y %H:%M"),
        )

    def save_markdown(self, path: str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.generate_markdown())
        return path

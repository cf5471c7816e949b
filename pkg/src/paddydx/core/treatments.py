"""Treatment knowledge base: per-class remediation advice.

Entries live in a bundled JSON file (override path via ``load_kb``) so
agronomists can edit advice without touching code. Schema: a JSON array of
``{slug, summary, actions[]}``. Every disease class must carry at least one
action; ``normal`` maps to a zero-action healthy entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from paddydx.core import taxonomy
from paddydx.errors import InvalidInput, NotFound


@dataclass(frozen=True)
class TreatmentEntry:
    class_index: int
    slug: str
    summary: str
    actions: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "slug": self.slug,
            "summary": self.summary,
            "actions": list(self.actions),
        }


class TreatmentKB:
    """Immutable slug-keyed treatment lookup covering all 13 classes."""

    def __init__(self, entries: dict[str, TreatmentEntry]):
        missing = {c.slug for c in taxonomy.CLASSES} - set(entries)
        if missing:
            raise InvalidInput(f"treatment KB missing classes: {sorted(missing)}")
        self._entries = dict(entries)

    def for_class(self, class_index: int) -> TreatmentEntry:
        slug = taxonomy.index_to_slug(class_index)  # raises NotFound on bad index
        return self._entries[slug]

    def for_slug(self, slug: str) -> TreatmentEntry:
        entry = self._entries.get(slug)
        if entry is None:
            raise NotFound(f"no treatment entry for slug: {slug!r}")
        return entry


def _parse_entries(raw: object) -> dict[str, TreatmentEntry]:
    if not isinstance(raw, list):
        raise InvalidInput("treatment KB must be a JSON array")
    entries: dict[str, TreatmentEntry] = {}
    for item in raw:
        slug = item.get("slug")
        idx = taxonomy.class_index(slug)
        actions = tuple(item.get("actions", ()))
        if slug == "normal":
            if actions:
                raise InvalidInput("'normal' entry must carry no actions")
        elif not actions:
            raise InvalidInput(f"disease entry {slug!r} must carry >= 1 action")
        if slug in entries:
            raise InvalidInput(f"duplicate treatment entry for {slug!r}")
        entries[slug] = TreatmentEntry(
            class_index=idx,
            slug=slug,
            summary=str(item.get("summary", "")),
            actions=actions,
        )
    return entries


def load_kb(path: str | Path | None = None) -> TreatmentKB:
    """Load the KB from ``path``, or the bundled default when omitted."""
    if path is None:
        text = resources.files("paddydx.core").joinpath("data/treatments.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return TreatmentKB(_parse_entries(json.loads(text)))


_default_kb: TreatmentKB | None = None


def default_kb() -> TreatmentKB:
    global _default_kb
    if _default_kb is None:
        _default_kb = load_kb()
    return _default_kb


def treatment_for(class_index: int) -> TreatmentEntry:
    """Bundled-KB lookup by classification index."""
    return default_kb().for_class(class_index)

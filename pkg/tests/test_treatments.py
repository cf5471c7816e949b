import json

import pytest

from paddydx.core import taxonomy
from paddydx.core.treatments import load_kb, treatment_for
from paddydx.errors import InvalidInput, NotFound


def test_every_disease_class_has_actions():
    for c in taxonomy.CLASSES:
        entry = treatment_for(c.index)
        if c.slug == "normal":
            assert entry.actions == ()
        else:
            assert len(entry.actions) >= 1


def test_normal_maps_to_healthy_entry():
    entry = treatment_for(taxonomy.class_index("normal"))
    assert entry.slug == "normal"
    assert entry.actions == ()


def test_out_of_range_index():
    with pytest.raises(NotFound):
        treatment_for(13)


def test_kb_loads_from_custom_path(tmp_path):
    doc = [
        {"slug": c.slug, "summary": "s", "actions": [] if c.slug == "normal" else ["a"]}
        for c in taxonomy.CLASSES
    ]
    path = tmp_path / "kb.json"
    path.write_text(json.dumps(doc))
    kb = load_kb(path)
    assert kb.for_slug("blast").actions == ("a",)


def test_kb_rejects_missing_class(tmp_path):
    doc = [{"slug": "blast", "summary": "s", "actions": ["a"]}]
    path = tmp_path / "kb.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidInput):
        load_kb(path)


def test_kb_rejects_actionless_disease(tmp_path):
    doc = [
        {"slug": c.slug, "summary": "s", "actions": [] if c.slug in ("normal", "blast") else ["a"]}
        for c in taxonomy.CLASSES
    ]
    path = tmp_path / "kb.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidInput):
        load_kb(path)

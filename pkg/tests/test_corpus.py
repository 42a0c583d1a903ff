"""Tests for per-condition corpus stores: seeding, appends, versioning, recovery."""

import json

import pytest

from ideafeed.corpus import CONDITIONS, CorpusStore
from ideafeed.errors import ConditionMismatch, IoFailure, TooFewSeeds
from ideafeed.runtime import data_path
from ideafeed.session import IdeationRecord


def write_seed_file(path, n=60):
    lines = [f"Seed activity message number {i} about moving more." for i in range(n)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def record_for(condition, text, iteration=1, rid="r1"):
    return IdeationRecord(
        id=rid,
        session_id="sess",
        prompt_id="p1",
        condition=condition,
        iteration=iteration,
        text=text,
    )


# -- initialization ----------------------------------------------------------


def test_init_takes_first_n_in_order(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    snap = store.init_corpus("SAX", seeds, n=50)
    assert len(snap) == 50
    assert snap.version == 1
    assert snap.condition == "SAX"
    assert snap.texts[0] == "Seed activity message number 0 about moving more."
    assert snap.texts[49] == "Seed activity message number 49 about moving more."


def test_init_with_seed_draws_without_replacement(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    a = store.init_corpus("SA", seeds, n=20, seed=13)
    assert len(set(a.texts)) == 20
    b = store.init_corpus("SA", seeds, n=20, seed=13)
    assert a.texts == b.texts  # same seed, same draw
    c = store.init_corpus("SA", seeds, n=20, seed=14)
    assert c.texts != a.texts


def test_init_rejects_bad_sizes_and_missing_files(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt", n=10)
    with pytest.raises(ValueError):
        store.init_corpus("S", seeds, n=0)
    with pytest.raises(TooFewSeeds):
        store.init_corpus("S", seeds, n=11)
    with pytest.raises(IoFailure):
        store.init_corpus("S", tmp_path / "nope.txt", n=5)
    with pytest.raises(ConditionMismatch):
        store.init_corpus("XYZ", seeds, n=5)


def test_bundled_seed_file_covers_default_size(store):
    snap = store.init_corpus("N", data_path("seed_messages.txt"), n=50)
    assert len(snap) == 50
    assert snap.version == 1


def test_reinit_overwrites(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    store.init_corpus("S", seeds, n=5)
    store.append_ideation("S", record_for("S", "brand new idea"))
    snap = store.init_corpus("S", seeds, n=7)
    assert len(snap) == 7
    assert snap.version == 1
    assert "brand new idea" not in snap.texts


# -- appends and versioning --------------------------------------------------


def test_three_appends_reach_version_four(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    store.init_corpus("SAXC", seeds, n=10)
    for i, text in enumerate(["walk in rain", "swim at dawn", "bike to work"]):
        snap = store.append_ideation("SAXC", record_for("SAXC", text, rid=f"r{i}"))
        assert snap.version == 2 + i
    assert snap.version == 4
    assert len(snap) == 13
    assert snap.texts[-3:] == ("walk in rain", "swim at dawn", "bike to work")


def test_duplicate_text_append_is_allowed(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    store.init_corpus("S", seeds, n=5)
    first = store.snapshot("S").texts[0]
    snap = store.append_ideation("S", record_for("S", first))
    assert snap.texts.count(first) == 2


def test_append_checks_record_condition(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    store.init_corpus("SA", seeds, n=5)
    with pytest.raises(ConditionMismatch):
        store.append_ideation("SA", record_for("SAX", "mismatched"))


def test_conditions_stay_isolated(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    store.init_corpus("SA", seeds, n=5)
    store.init_corpus("SAX", seeds, n=5)
    store.append_ideation("SA", record_for("SA", "only in SA"))
    assert "only in SA" in store.snapshot("SA").texts
    assert "only in SA" not in store.snapshot("SAX").texts
    assert store.snapshot("SA").version == 2
    assert store.snapshot("SAX").version == 1


def test_snapshots_are_immutable_views(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    before = store.init_corpus("S", seeds, n=5)
    store.append_ideation("S", record_for("S", "later addition"))
    assert len(before) == 5  # old snapshot untouched
    assert before.version == 1
    after = store.snapshot("S")
    assert len(after) == 6
    assert after is not before


def test_versions_reports_only_existing_corpora(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    assert store.versions() == {}
    store.init_corpus("N", seeds, n=5)
    store.init_corpus("SAXC", seeds, n=5)
    store.append_ideation("SAXC", record_for("SAXC", "x marks the spot"))
    assert store.versions() == {"N": 1, "SAXC": 2}
    assert not store.has_corpus("SA")
    assert store.has_corpus("N")


# -- persistence and recovery ------------------------------------------------


def test_reload_after_restart_is_identical(store, tmp_path, embedder):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    store.init_corpus("SAX", seeds, n=8)
    store.append_ideation("SAX", record_for("SAX", "first append", rid="a"))
    store.append_ideation("SAX", record_for("SAX", "second append", rid="b"))
    live = store.snapshot("SAX")

    reborn = CorpusStore(store.root, embedder)  # fresh process, same files
    snap = reborn.snapshot("SAX")
    assert snap.version == live.version == 3
    assert snap.texts == live.texts
    assert [e.id for e in snap.entries] == [e.id for e in live.entries]
    assert (snap.matrix == live.matrix).all()


def test_jsonl_is_the_source_of_truth(store, tmp_path, embedder):
    # the index file is convenience output; deleting it must not matter
    seeds = write_seed_file(tmp_path / "seeds.txt")
    store.init_corpus("S", seeds, n=5)
    store.append_ideation("S", record_for("S", "kept row"))
    (store.root / "corpus_index.json").unlink()
    reborn = CorpusStore(store.root, embedder)
    assert reborn.snapshot("S").version == 2
    assert "kept row" in reborn.snapshot("S").texts


def test_stored_rows_carry_scores_and_lineage(store, tmp_path):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    store.init_corpus("S", seeds, n=5)
    store.append_ideation("S", record_for("S", "tracked idea", iteration=2))
    rows = [
        json.loads(line)
        for line in (store.root / "corpus_S.jsonl").read_text().splitlines()
    ]
    assert len(rows) == 6
    assert rows[-1]["iteration"] == 2
    assert rows[-1]["text"] == "tracked idea"
    assert set(rows[-1]) == {
        "id", "text", "condition", "iteration", "parent", "quality_pct", "diversity_pct", "ts",
    }
    assert all(r["iteration"] == 0 for r in rows[:5])


def test_snapshot_percentile_and_conditions_constant():
    assert CONDITIONS == ("N", "S", "SA", "SAX", "SAC", "SAXC")


def test_pairwise_percentile_interpolates(store, tmp_path, embedder):
    seeds = write_seed_file(tmp_path / "seeds.txt")
    snap = store.init_corpus("S", seeds, n=5)
    import numpy as np

    from ideafeed.embedding import pairwise_angular

    dist = pairwise_angular(snap.matrix)
    iu = np.triu_indices(5, k=1)
    assert snap.pairwise_percentile(75.0) == pytest.approx(
        float(np.percentile(dist[iu], 75.0)), abs=1e-12
    )
    tiny = store.init_corpus("N", seeds, n=1)
    assert str(tiny.pairwise_percentile()) == "nan"

from __future__ import annotations

import pytest

from icfo.corpus.instances import bundled_instances, cell_count, get_instance
from icfo.corpus.random import random_morphisms, two_groupoid_morphisms
from icfo.corpus.runner import run_corpus
from icfo.data.io import read_parquet


def test_bundled_corpus_matches_expectations(tmp_path):
    run = run_corpus(tmp_path, cap=3)
    assert run.ok, run.mismatches
    assert len(run.paths) == len(bundled_instances())
    assert all(p.exists() for p in run.paths)
    assert len(run.summary) == sum(len(i.checks) for i in bundled_instances())

    table = read_parquet(tmp_path / "summary")
    assert set(table["verdict"]) <= {"pass", "fail", "inconclusive"}
    assert len(table) == len(run.summary)


def test_selected_instances_without_files():
    run = run_corpus(None, names=["sl2", "sl2_perturbed"])
    assert run.ok
    assert not run.paths
    assert dict(zip(run.summary["instance"] + "/" + run.summary["check"], run.summary["verdict"])) == {
        "sl2/d_squared": "pass",
        "sl2/jacobi": "pass",
        "sl2_perturbed/d_squared": "fail",
        "sl2_perturbed/jacobi": "fail",
    }


def test_unknown_instance():
    with pytest.raises(KeyError):
        run_corpus(None, names=["nope"])
    with pytest.raises(KeyError):
        get_instance("nope")


def test_instance_lookup():
    inst = get_instance("k_z2_2")
    assert inst.kind == "simplicial_set"
    # 1 + 1 + 2 + 8 simplices through level 3
    assert cell_count(inst.build(3)) == 12


def test_random_morphisms_are_seeded():
    a = [s.name for s in random_morphisms(12, seed=5)]
    b = [s.name for s in random_morphisms(12, seed=5)]
    assert a == b
    for sample in random_morphisms(5, seed=1, cap=2):
        assert not sample.morphism.violations()
        assert sample.morphism.cap == 2


def test_two_groupoid_draws_come_from_the_pool():
    pool = {s.name for s in two_groupoid_morphisms(4)}
    samples = list(random_morphisms(10, seed=0, cap=3, two_groupoids=True))
    assert samples[4].name in pool and samples[9].name in pool
    assert samples[4].morphism.cap == 4
    assert samples[0].morphism.cap == 3

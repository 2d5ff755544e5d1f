"""Invariants checked over seeded random decompositions."""
import random

import pytest

from conftest import pipeline
from specgen import random_doc, random_valid_spec

from nonfill_scl.homology import build_cell_complex, check_null_homologous
from nonfill_scl.model import spec_from_dict, validate
from nonfill_scl.reassembly import extremal_surface

SEEDS = range(8)


def small_spec(seed):
    return random_valid_spec(random.Random(seed), max_strands=2, max_components=2,
                             weights=(1, 2, "1/2"))


def valid_docs(n, seed, **kw):
    rng, out = random.Random(seed), []
    while len(out) < n:
        doc = random_doc(rng, **kw)
        if doc is not None and validate(spec_from_dict(doc)).valid:
            out.append(doc)
    return out


@pytest.mark.parametrize("seed", range(30))
def test_random_documents_validate_consistently(seed):
    rng = random.Random(seed)
    doc = None
    while doc is None:
        doc = random_doc(rng, max_strands=3, max_components=3)
    spec = spec_from_dict(doc)
    rep = validate(spec)
    assert rep == validate(spec)
    assert rep.valid == (not rep.failures)
    if rep.valid:
        assert len(rep.derived_turn_arcs) == sum(len(h.strands) for h in spec.handles)
        assert build_cell_complex(rep.layout).euler_characteristic() == 2 - 2 * rep.derived_genus


def _relabel(doc):
    ren = {}
    for h in doc["handles"]:
        ren[h["id"]] = "H_" + h["id"]
    out = {**doc}
    out["handles"] = [{"id": ren[h["id"]], "strands": h["strands"]} for h in doc["handles"]]
    out["disks"] = [{"id": "disk0", "boundary": [
        {**e, "handle": ren[e["handle"]]} if "handle" in e else e for e in d["boundary"]]}
        for d in doc["disks"]]
    out["sigma1"] = {"euler_char": doc["sigma1"]["euler_char"], "boundary": [
        [{**e, "handle": ren[e["handle"]]} if "handle" in e else e for e in cyc]
        for cyc in doc["sigma1"]["boundary"]]}
    out["chain"] = [{**c, "id": "c_" + c["id"], "route": [
        {"handle": ren[r["handle"]], "strand": r["strand"]} for r in c["route"]]}
        for c in doc["chain"]]
    return out


@pytest.mark.parametrize("doc", valid_docs(20, 5, max_strands=3, max_components=2))
def test_null_homology_ignores_labels_and_rotation(doc):
    base = check_null_homologous(spec_from_dict(doc))
    assert check_null_homologous(spec_from_dict(_relabel(doc))) == base
    for c in doc["chain"]:
        c["route"] = c["route"][1:] + c["route"][:1]
    assert check_null_homologous(spec_from_dict(doc)) == base


@pytest.mark.parametrize("seed", SEEDS)
def test_value_properties(seed):
    spec = small_spec(seed)
    if spec is None:
        pytest.skip("no valid draw")
    for single in (True, False):
        report, graph, paths, inst, res = pipeline(spec, single)
        for s in graph.edges.values():
            assert graph.dual(graph.dual(s)) == s
        if res.status != "optimal":
            continue
        assert res.value >= 0
        assert pipeline(spec.reversed_chain(), single)[-1].value == res.value
        assert pipeline(spec.scaled(2), single)[-1].value == 2 * res.value
        rep = extremal_surface(report, inst, res)
        assert rep.ok and -rep.chi_final == 2 * rep.n_final * res.value

"""Random small decompositions over two fixed skeletons, for oracle and property tests."""
from __future__ import annotations

import random

from nonfill_scl.homology import check_null_homologous
from nonfill_scl.model import AlphaRef, Layout, spec_from_dict, validate

SKELETONS = {
    # genus-2 surface: Sigma1 a one-holed torus, two handles, one disk
    "sep2": {"euler_char": -1, "handles": ["h1", "h2"],
             "disk": [("a1",), ("h1", "A", True), ("a2",), ("h2", "A", True),
                      ("a3",), ("h1", "B", False), ("a4",), ("h2", "B", False)]},
    # genus-2 surface: Sigma1 a twice-holed torus, one handle, one disk
    "ann": {"euler_char": -2, "handles": ["h1"],
            "disk": [("a1",), ("h1", "A", True), ("a2",), ("h1", "B", False)]},
}


def _disk_entry(e):
    if len(e) == 1:
        return {"alpha": e[0]}
    return {"handle": e[0], "side": e[1], "reversed": e[2]}


def _boundary_doc(spec):
    out = []
    for cyc in Layout(spec).derived_sigma1_cycles():
        out.append([{"alpha": it.alpha} if isinstance(it, AlphaRef)
                    else {"handle": it.handle, "end": it.end} for it in cyc])
    return out


def make_doc(skeleton, strands, chain):
    sk = SKELETONS[skeleton]
    doc = {
        "format": 1,
        "sigma1": {"euler_char": sk["euler_char"], "boundary": []},
        "disks": [{"id": "D", "boundary": [_disk_entry(e) for e in sk["disk"]]}],
        "handles": [{"id": h, "strands": [{"id": f"s{k + 1}", "direction": d}
                                           for k, d in enumerate(strands.get(h, []))]}
                    for h in sk["handles"]],
        "chain": [{"id": cid, "weight": str(w),
                   "route": [{"handle": h, "strand": s} for h, s in route]}
                  for cid, w, route in chain],
    }
    doc["sigma1"]["boundary"] = _boundary_doc(spec_from_dict(doc))
    return doc


def random_doc(rng: random.Random, skeleton=None, max_strands=2, max_components=2,
               weights=(1,)):
    skeleton = skeleton or rng.choice(sorted(SKELETONS))
    sk = SKELETONS[skeleton]
    strands = {h: [rng.choice(["AtoB", "BtoA"]) for _ in range(rng.randint(0, max_strands))]
               for h in sk["handles"]}
    crossings = [(h, f"s{k + 1}") for h in sk["handles"] for k in range(len(strands[h]))]
    if not crossings:
        return None
    rng.shuffle(crossings)
    k = rng.randint(1, min(max_components, len(crossings)))
    cuts = sorted(rng.sample(range(1, len(crossings)), k - 1))
    routes = [crossings[i:j] for i, j in zip([0] + cuts, cuts + [len(crossings)])]
    chain = [(f"g{i}", rng.choice(weights), r) for i, r in enumerate(routes)]
    return make_doc(skeleton, strands, chain)


def random_valid_spec(rng: random.Random, attempts=200, **kw):
    """A valid, null-homologous random spec, or None if none turned up."""
    for _ in range(attempts):
        doc = random_doc(rng, **kw)
        if doc is None:
            continue
        spec = spec_from_dict(doc)
        report = validate(spec)
        if report.valid and check_null_homologous(report):
            return spec
    return None

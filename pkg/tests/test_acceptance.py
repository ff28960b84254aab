"""Acceptance gate: one test per criterion, each printing a PASS line.

Criteria 1 through 6 and 8 are self-contained randomized checks against the
brute-force verifier. Criterion 7 reads the committed scaled model fixture
and criterion 9 the committed exporter fixtures (model plus manifest), so
the suite runs offline from a plain checkout.
"""

import hashlib
import json
import random
import time

from forestexplain.abstraction import build_abstraction, soft_literals
from forestexplain.encoder import EncoderOptions, encode, encode_for_instance
from forestexplain.explain import (
    ABDUCTIVE,
    CONTRASTIVE,
    enumerate_explanations,
    explain_dataset,
    extract_axp,
    extract_cxp,
)
from forestexplain.model import BINARY, CATEGORICAL, ORDINAL, predict, predict_index, predict_tree
from forestexplain.model_io import load_model
from forestexplain.oracle import EmbeddedOracle
from forestexplain.verify import (
    axp_family,
    check_axp,
    check_cxp,
    cxp_family,
    dnf_truth_table,
    evaluate_dnf,
    minimal_hitting_sets,
    prime_implicants,
    reduce_dnf_to_rf,
)

from conftest import (
    FIXTURES,
    RUNNING_INSTANCE,
    check_encoding_faithful,
    random_forest,
    random_instance,
)


def _ok(criterion: str, detail: str = ""):
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE PASS: {criterion}{suffix}")


def _families(oracle, softs):
    out = enumerate_explanations(oracle, softs)
    key = lambda s: (len(s), sorted(s))
    axps = sorted({frozenset(e.features) for e in out if e.kind == ABDUCTIVE}, key=key)
    cxps = sorted({frozenset(e.features) for e in out if e.kind == CONTRASTIVE}, key=key)
    return axps, cxps, out


def _cell_count(forest, abstraction) -> int:
    total = 1
    for f in abstraction.used_features():
        spec = forest.features[f]
        if spec.kind == BINARY:
            total *= 2
        elif spec.kind == CATEGORICAL:
            total *= len(spec.values)
        else:
            total *= len(abstraction.thresholds[f]) + 1
    return total


def _sized_forest(seed: int, max_cells: int, **ranges):
    """Deterministic rejection sampling: keep redrawing until the abstract
    space is small enough to sweep exhaustively."""
    attempt = 0
    while True:
        rng = random.Random(seed * 1_000_003 + attempt)
        forest = random_forest(
            rng,
            m=rng.randint(2, ranges.get("max_m", 8)),
            trees=rng.randint(1, ranges.get("max_trees", 7)),
            depth=rng.randint(1, ranges.get("max_depth", 4)),
            classes=rng.randint(2, ranges.get("max_classes", 4)),
            kinds=rng.choice(
                ((BINARY, ORDINAL), (BINARY, ORDINAL, CATEGORICAL), (BINARY,))
            ),
            threshold_grid=rng.choice((3, 4, 5)),
        )
        if _cell_count(forest, build_abstraction(forest)) <= max_cells:
            return forest, rng
        attempt += 1


def test_running_example_end_to_end(running_example):
    started = time.perf_counter()
    forest = running_example
    assert [forest.classes[predict_tree(t, RUNNING_INSTANCE)] for t in forest.trees] == [
        "Yes", "No", "Yes",
    ]
    assert predict(forest, RUNNING_INSTANCE) == "Yes"

    assert axp_family(forest, RUNNING_INSTANCE) == [frozenset({0, 2})]
    assert cxp_family(forest, RUNNING_INSTANCE) == [frozenset({0}), frozenset({2})]

    encoding, softs = encode_for_instance(forest, RUNNING_INSTANCE)
    assert extract_axp(EmbeddedOracle(encoding), softs).features == (0, 2)
    assert extract_cxp(EmbeddedOracle(encoding), softs).features == (0,)
    axps, cxps, _ = _families(EmbeddedOracle(encoding), softs)
    assert axps == [frozenset({0, 2})]
    assert cxps == [frozenset({0}), frozenset({2})]

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _ok("running example reproduced end to end", f"{elapsed:.3f}s")


def test_encoding_matches_brute_force_on_random_forests():
    started = time.perf_counter()
    cells = 0
    for seed in range(200):
        forest, rng = _sized_forest(seed, max_cells=512)
        target = rng.randrange(len(forest.classes))
        encoding = encode(forest, target)
        cells += check_encoding_faithful(forest, encoding)
    elapsed = time.perf_counter() - started
    assert elapsed < 300
    _ok(
        "encoding agrees with exhaustive prediction sweep",
        f"200 forests, {cells} cells, {elapsed:.1f}s",
    )


def test_extracted_explanations_are_always_genuine():
    started = time.perf_counter()
    immutable = 0
    for seed in range(500):
        forest, rng = _sized_forest(
            seed + 1_000, max_cells=512, max_m=6, max_trees=5, max_depth=3, max_classes=3,
        )
        instance = random_instance(rng, forest)
        encoding, softs = encode_for_instance(forest, instance)
        axp = extract_axp(EmbeddedOracle(encoding), softs)
        assert check_axp(forest, instance, axp.features), seed
        cxp = extract_cxp(EmbeddedOracle(encoding), softs)
        if cxp.immutable:
            immutable += 1
            assert cxp_family(forest, instance) == []
        else:
            assert check_cxp(forest, instance, cxp.features), seed
    elapsed = time.perf_counter() - started
    _ok(
        "500 extractions verified sufficient and minimal",
        f"{immutable} immutable predictions, {elapsed:.1f}s",
    )


def test_enumerated_families_satisfy_hitting_set_duality():
    started = time.perf_counter()
    for seed in range(50):
        forest, rng = _sized_forest(seed + 5_000, max_cells=512)
        instance = random_instance(rng, forest)
        encoding, softs = encode_for_instance(forest, instance)
        axps, cxps, out = _families(EmbeddedOracle(encoding), softs)
        assert axps == axp_family(forest, instance), seed
        assert cxps == cxp_family(forest, instance), seed
        assert minimal_hitting_sets(axps) == cxps, seed
        assert minimal_hitting_sets(cxps) == axps, seed
        assert len(out) == len(axps) + len(cxps), seed
    elapsed = time.perf_counter() - started
    _ok("families are exact minimal-hitting-set duals", f"50 instances, {elapsed:.1f}s")


def test_dnf_reduction_prime_implicant_correspondence():
    started = time.perf_counter()
    for trial in range(100):
        rng = random.Random(42_000 + trial)
        m = rng.randint(1, 10)
        n = rng.randint(1, 6)
        dnf = tuple(
            frozenset(
                rng.choice((-1, 1)) * v
                for v in rng.sample(range(1, m + 1), rng.randint(1, m))
            )
            for _ in range(n)
        )
        forest = reduce_dnf_to_rf(dnf, m)
        v = tuple(rng.randint(0, 1) for _ in range(m))
        table = dnf_truth_table(dnf, m)
        side = table if evaluate_dnf(dnf, v) else ((1 << (1 << m)) - 1) & ~table
        expected = sorted(
            (
                frozenset(abs(l) - 1 for l in term)
                for term in prime_implicants(side, m)
                if all(v[abs(l) - 1] == (1 if l > 0 else 0) for l in term)
            ),
            key=lambda s: (len(s), sorted(s)),
        )
        assert axp_family(forest, v) == expected, trial
    elapsed = time.perf_counter() - started
    _ok(
        "explanations of reduced forests are the consistent prime implicants",
        f"100 formulas, {elapsed:.1f}s",
    )


def test_oracle_call_accounting(running_example):
    encoding, softs = encode_for_instance(running_example, RUNNING_INSTANCE)
    oracle = EmbeddedOracle(encoding)
    extract_axp(oracle, softs)
    assert oracle.stats.calls == len(softs) == 4
    assert oracle.stats.sat_count + oracle.stats.unsat_count == len(softs)
    oracle = EmbeddedOracle(encoding)
    extract_cxp(oracle, softs)
    assert oracle.stats.calls == len(softs) + 1

    for seed in range(60):
        forest, rng = _sized_forest(seed + 9_000, max_cells=4096, max_m=6)
        instance = random_instance(rng, forest)
        encoding, softs = encode_for_instance(forest, instance)
        oracle = EmbeddedOracle(encoding)
        extract_axp(oracle, softs)
        assert oracle.stats.calls == len(softs), seed
        assert oracle.stats.sat_count + oracle.stats.unsat_count == len(softs), seed
        oracle = EmbeddedOracle(encoding)
        result = extract_cxp(oracle, softs)
        expected = 1 if result.immutable else len(softs) + 1
        assert oracle.stats.calls == expected, seed
    _ok("abductive extraction spends exactly one oracle call per soft literal")


def test_encoding_options_are_observationally_equivalent():
    started = time.perf_counter()
    grid = [
        EncoderOptions(chaining=c, naive_comparators=nc)
        for c in (True, False)
        for nc in (True, False)
    ]
    for seed in range(30):
        forest, rng = _sized_forest(seed + 70_000, max_cells=256)
        target = rng.randrange(len(forest.classes))
        for options in grid:
            check_encoding_faithful(forest, encode(forest, target, options))
        instance = random_instance(rng, forest)
        families = set()
        for options in grid:
            encoding, softs = encode_for_instance(forest, instance, options)
            axps, cxps, _ = _families(EmbeddedOracle(encoding), softs)
            families.add((tuple(map(tuple, map(sorted, axps))), tuple(map(tuple, map(sorted, cxps)))))
        assert len(families) == 1, seed
    elapsed = time.perf_counter() - started
    _ok(
        "all encoder option combinations are observationally equivalent",
        f"30 forests x {len(grid)} encodings, {elapsed:.1f}s",
    )


REFERENCE_VARS = 19114
REFERENCE_CLAUSES = 42362


def test_scaled_model_encoding_size_and_latency():
    model_path = FIXTURES / "scaled" / "model.json"
    manifest_path = FIXTURES / "scaled" / "manifest.json"
    forest = load_model(model_path)
    manifest = json.loads(manifest_path.read_text())
    assert forest.m == 20 and len(forest.classes) == 2
    assert len(forest.trees) == manifest["trees"] == 100

    encoding = encode(forest, target=0)
    nvars, nclauses = encoding.nvars, len(encoding.clauses)
    assert REFERENCE_VARS / 5 <= nvars <= REFERENCE_VARS * 5
    assert REFERENCE_CLAUSES / 5 <= nclauses <= REFERENCE_CLAUSES * 5

    instances = [tuple(row["instance"]) for row in manifest["holdout"][:5]]
    started = time.perf_counter()
    results = explain_dataset(forest, instances, "axp")
    elapsed = time.perf_counter() - started
    average = elapsed / len(results)
    for res, inst in zip(results, instances):
        assert res.explanations[0].features  # non-trivial reason set
    assert average <= 2.0
    _ok(
        "scaled model stays within expected size and latency",
        f"{nvars} vars, {nclauses} clauses, {average:.2f}s avg over {len(results)} rows",
    )


def test_exported_fixtures_round_trip():
    checked = 0
    for name, accuracy_pin in (("scaled", None), ("wdbc", 0.96)):
        base = FIXTURES / name
        manifest = json.loads((base / "manifest.json").read_text())
        blob = (base / "model.json").read_bytes()
        assert manifest["checksum"] == "sha256:" + hashlib.sha256(blob).hexdigest()
        forest = load_model(base / "model.json")
        assert len(forest.trees) == manifest["trees"]

        agree = 0
        correct = 0
        holdout = manifest["holdout"]
        for row in holdout:
            got = predict(forest, tuple(row["instance"]))
            agree += got == row["predicted"]
            correct += got == row["label"]
        assert agree == len(holdout), f"{name}: manifest disagrees with reimplementation"
        accuracy = correct / len(holdout)
        assert abs(accuracy - manifest["test_accuracy"]) < 1e-9
        if accuracy_pin is not None:
            assert abs(accuracy - accuracy_pin) <= 0.05
        checked += len(holdout)
    _ok(
        "exported models round-trip with full manifest agreement",
        f"{checked} held-out predictions",
    )

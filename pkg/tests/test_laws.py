"""The law registry and its grid runner: contracts, determinism, sensitivity."""

import json
from fractions import Fraction as F

import pytest

from finstoch import multisets
from finstoch.core import Dist, Kernel, unchecked_weights
from finstoch.laws import (
    GridSpec,
    Instance,
    law_by_id,
    law_registry,
    make_kernel,
    run_laws,
)

SMALL = GridSpec(x_sizes=(1, 2), y_sizes=(1, 2), k_values=(0, 1, 2), number_sizes=(1, 2))


def perturb(kernel: Kernel, row_index: int, delta: F) -> Kernel:
    """Shift one weight of one row, bypassing row-sum validation."""
    with unchecked_weights():
        rows = list(kernel.rows)
        target = rows[row_index]
        y = target.carrier.elements[0] if not target.items else target.items[0][0]
        new = dict(target.items)
        new[y] = new.get(y, F(0)) + delta
        rows[row_index] = Dist(kernel.codomain, tuple(new.items()))
        return Kernel(kernel.domain, kernel.codomain, tuple(rows))


class TestRegistry:
    def test_size_and_uniqueness(self):
        reg = law_registry()
        assert len(reg) >= 40
        assert len({law.id for law in reg}) == len(reg)

    def test_lookup_known_ids(self):
        law = law_by_id("Thm8.2.multizip")
        assert "mzip" in law.ref and "mn" in law.ref
        assert law_by_id("Thm8.3.flrn").ref.startswith("Flrn")

    def test_unknown_id(self):
        with pytest.raises(KeyError):
            law_by_id("NoSuchLaw")

    def test_every_law_self_describes(self):
        for law in law_registry():
            assert law.ref
            assert law.dims

    def test_catalogue_doc_in_sync(self):
        import pathlib

        doc = pathlib.Path(__file__).resolve().parent.parent / "docs" / "LAWS.md"
        text = doc.read_text()
        for law in law_registry():
            assert f"`{law.id}`" in text, f"{law.id} missing from docs/LAWS.md"


class TestRunner:
    def test_empty_selection(self):
        report = run_laws(SMALL, selection=[])
        assert report.results == ()
        assert report.total_failures == 0

    def test_unknown_selection(self):
        with pytest.raises(KeyError):
            run_laws(SMALL, selection=["NoSuchLaw"])

    def test_single_law(self):
        report = run_laws(SMALL, selection=["Prop6.2.flrn_dd"])
        assert len(report.results) == 1
        assert report.results[0].instances > 0
        assert report.total_failures == 0

    def test_small_grid_all_pass(self):
        report = run_laws(SMALL)
        assert report.total_failures == 0
        assert report.total_instances > 500

    def test_deterministic_reports(self):
        a = run_laws(SMALL, selection=["Lemma5.4.acc_arr", "Eq3.dd_square"]).to_json()
        b = run_laws(SMALL, selection=["Lemma5.4.acc_arr", "Eq3.dd_square"]).to_json()
        for payload in (a, b):
            payload.pop("seconds")
            for law in payload["laws"]:
                law.pop("seconds")
        assert a == b

    def test_parallel_matches_serial(self):
        sel = ["Lemma5.1.acc_perm", "Prop6.2.arr_dd", "Thm8.3.flrn"]
        serial = run_laws(SMALL, selection=sel, jobs=1).to_json()
        parallel = run_laws(SMALL, selection=sel, jobs=2).to_json()
        for payload in (serial, parallel):
            payload.pop("seconds")
            for law in payload["laws"]:
                law.pop("seconds")
        assert serial == parallel

    def test_json_round_trip(self):
        report = run_laws(SMALL, selection=["Eq3.dd_square"])
        payload = json.loads(json.dumps(report.to_json()))
        assert payload["laws"][0]["law_id"] == "Eq3.dd_square"
        assert set(payload["laws"][0]) >= {"law_id", "paper_ref", "instances", "passes", "failures"}

    def test_table_renders(self):
        report = run_laws(SMALL, selection=["Eq3.dd_square"])
        assert "Eq3.dd_square" in report.table()

    def test_carrier_guard_records_skips(self):
        # power(X, 3) has 8 elements, over the limit of 5, so every
        # instance is skipped regardless of what is already cached
        tight = GridSpec(x_sizes=(2,), y_sizes=(2,), k_values=(3,), carrier_limit=5)
        report = run_laws(tight, selection=["Lemma5.1.acc_perm"])
        assert report.total_skipped > 0
        assert report.total_instances == 0
        assert report.total_failures == 0


class TestMutationSensitivity:
    def test_corrupted_dd_fails_with_counterexample(self, monkeypatch):
        real = multisets.dd_kernel

        def corrupted(X, K):
            return perturb(real(X, K), 0, F(1, 100))

        monkeypatch.setattr(multisets, "dd_kernel", corrupted)
        with unchecked_weights():
            report = run_laws(SMALL, selection=["Prop6.2.flrn_dd"])
        assert report.total_failures > 0
        law_id, instance = report.first_failure()
        assert law_id == "Prop6.2.flrn_dd"
        assert "X=" in instance

    def test_corrupted_arr_fails(self, monkeypatch):
        real = multisets.arr_kernel

        def corrupted(X, K):
            return perturb(real(X, K), 0, F(1, 100))

        monkeypatch.setattr(multisets, "arr_kernel", corrupted)
        with unchecked_weights():
            report = run_laws(SMALL, selection=["Lemma5.4.acc_arr"])
        assert report.total_failures > 0

    def test_corrupted_multinomial_fails(self, monkeypatch):
        from finstoch import draws

        real = draws.multinomial_kernel

        def corrupted(f, K):
            return perturb(real(f, K), 0, F(1, 100))

        monkeypatch.setattr(draws, "multinomial_kernel", corrupted)
        with unchecked_weights():
            report = run_laws(SMALL, selection=["Thm8.2.flrn"])
        assert report.total_failures > 0


class TestKernelGenerators:
    def test_kinds_cover_the_design(self):
        from finstoch import make_finset

        X, Y = make_finset(["a", "b"]), make_finset(["u"])
        generic = make_kernel("generic", X, Y)
        assert generic is not None and all(r.weights for r in generic.rows)
        assert make_kernel("iso", X, Y) is None  # sizes differ
        collapse = make_kernel("collapse", X, Y)
        assert collapse.is_point_masses()
        const = make_kernel("const", X, X)
        assert const.rows[0] == const.rows[1]

    def test_generic_kernel_has_distinct_entries(self):
        from finstoch import make_finset

        for n in (1, 2, 3):
            for m in (1, 2, 3):
                X = make_finset([f"x{i}" for i in range(n)])
                Y = make_finset([f"y{j}" for j in range(m)])
                k = make_kernel("generic", X, Y)
                entries = [w for row in k.rows for w in row.weights]
                if m > 1:
                    assert len(set(entries)) == len(entries)

    def test_instance_description_mentions_dims(self):
        inst = Instance(grid=SMALL, K=2, fkind="generic")
        desc = inst.describe()
        assert "K=2" in desc and "fkind=generic" in desc

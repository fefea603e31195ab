import numpy as np
import pytest

from vqebench.pauli import (
    PauliString,
    PauliSum,
    PauliTerm,
    compose,
    dense_matrix,
    format_pauli_sum,
    parse_pauli_sum,
    pauli_action,
    qubitwise_commuting_groups,
    simplify,
)
from vqebench.models import HubbardSpec, hubbard_hamiltonian

from conftest import dense_sum, kron_from_label, random_pauli_string


def label(text):
    return PauliString.from_label(text)


class TestPauliString:
    def test_label_round_trip(self):
        s = label("XYZI")
        assert s.to_label() == "XYZI"
        assert s.labels == ("I", "Z", "Y", "X")  # qubit 0 is rightmost char

    def test_identity_is_valid(self):
        s = PauliString.identity(4)
        assert s.is_identity
        assert s.support == ()

    def test_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            PauliString(("Q",))

    def test_ordering_is_deterministic(self):
        assert PauliString(("I", "Z")) < PauliString(("Z", "I"))


class TestCompose:
    def test_involution(self):
        phase, product = compose(label("X"), label("X"))
        assert phase == 1 and product.is_identity

    def test_xy_gives_iz(self):
        phase, product = compose(label("X"), label("Y"))
        assert phase == 1j and product == label("Z")

    def test_two_qubit_against_dense_oracle(self):
        # (ZX, XX): multiply the 4x4 Kronecker matrices and factor the phase.
        a, b = label("ZX"), label("XX")
        phase, product = compose(a, b)
        lhs = kron_from_label("ZX") @ kron_from_label("XX")
        rhs = phase * kron_from_label(product.to_label())
        assert np.allclose(lhs, rhs, atol=1e-12)
        assert phase == 1j and product.to_label() == "YI"

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            compose(label("X"), label("XX"))

    def test_associative_up_to_phase(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 7))
            a, b, c = (random_pauli_string(rng, n) for _ in range(3))
            p1, ab = compose(a, b)
            p2, left = compose(ab, c)
            q1, bc = compose(b, c)
            q2, right = compose(a, bc)
            assert left == right
            assert abs(p1 * p2 - q1 * q2) < 1e-15

    def test_random_products_against_dense(self, rng):
        for _ in range(40):
            n = int(rng.integers(1, 5))
            a = random_pauli_string(rng, n)
            b = random_pauli_string(rng, n)
            phase, product = compose(a, b)
            lhs = kron_from_label(a.to_label()) @ kron_from_label(b.to_label())
            rhs = phase * kron_from_label(product.to_label())
            assert np.allclose(lhs, rhs, atol=1e-12)


class TestSimplify:
    def test_merges_duplicates(self):
        s = PauliSum.from_labels([(1.0, "X"), (1.0, "X")])
        out = simplify(s)
        assert out.n_terms == 1
        assert out.terms[0].coefficient == 2.0

    def test_cancellation_gives_empty_sum(self):
        s = PauliSum.from_labels([(1.0, "X"), (-1.0, "X")])
        assert simplify(s).n_terms == 0

    def test_six_site_interaction_identity_weight(self):
        # Expand U * sum_i (I - Z_up)(I - Z_down)/4 by hand: the identity
        # coefficient must come out at 6 * U / 4.
        U = 1.0
        sites = 6
        n = 2 * sites
        terms = []
        for i in range(sites):
            up, down = i, sites + i
            zz = ["I"] * n
            zz[up] = "Z"
            zz[down] = "Z"
            terms += [
                (U / 4, PauliString.identity(n)),
                (-U / 4, PauliString.single(n, up, "Z")),
                (-U / 4, PauliString.single(n, down, "Z")),
                (U / 4, PauliString(tuple(zz))),
            ]
        out = simplify(PauliSum.from_terms(terms, n))
        assert out.coefficient_of(PauliString.identity(n)) == pytest.approx(
            6 * U / 4
        )
        ham = hubbard_hamiltonian(HubbardSpec(sites=6, t=1.0, U=1.0))
        assert ham.coefficient_of(PauliString.identity(n)) == pytest.approx(1.5)

    def test_order_is_lexicographic(self, rng):
        terms = [(1.0, random_pauli_string(rng, 3)) for _ in range(12)]
        out = simplify(PauliSum.from_terms(terms, 3))
        labels = [t.string.labels for t in out.terms]
        assert labels == sorted(labels)

    def test_drop_tolerance(self):
        s = PauliSum.from_labels([(1e-13, "X"), (0.5, "Z")])
        out = simplify(s, drop_tol=1e-12)
        assert [t.string.to_label() for t in out.terms] == ["Z"]

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ValueError):
            simplify(PauliSum.from_labels([(1.0, "X")]), drop_tol=-1.0)


def greedy_groups_oracle(sum_):
    """Independent first-fit partition used to cross-check grouping."""
    groups = []
    for term in sum_.terms:
        if term.string.is_identity:
            groups.append({"constant": True, "terms": [term]})
            continue
        for group in groups:
            if group.get("constant"):
                continue
            taken = group["profile"]
            ok = all(
                taken.get(q, c) == c
                for q, c in enumerate(term.string.labels)
                if c != "I"
            )
            if ok:
                group["terms"].append(term)
                for q, c in enumerate(term.string.labels):
                    if c != "I":
                        taken[q] = c
                break
        else:
            groups.append(
                {
                    "profile": {
                        q: c
                        for q, c in enumerate(term.string.labels)
                        if c != "I"
                    },
                    "terms": [term],
                }
            )
    return groups


class TestGrouping:
    def test_diagonal_strings_share_a_group(self):
        s = PauliSum.from_labels([(1.0, "ZZI"), (1.0, "IZZ"), (1.0, "ZIZ")])
        assert len(qubitwise_commuting_groups(s)) == 1

    def test_x_and_z_split(self):
        s = PauliSum.from_labels([(1.0, "X"), (1.0, "Z")])
        assert len(qubitwise_commuting_groups(s)) == 2

    def test_identity_gets_own_group(self):
        s = PauliSum.from_labels([(0.5, "II"), (1.0, "ZZ"), (1.0, "ZI")])
        groups = qubitwise_commuting_groups(s)
        constant = [g for g in groups if g.is_constant]
        assert len(constant) == 1
        assert constant[0].n_terms == 1

    def test_partition_covers_input_exactly(self):
        ham = hubbard_hamiltonian(HubbardSpec(sites=6))
        groups = qubitwise_commuting_groups(ham)
        regrouped = sorted(t.string.labels for g in groups for t in g.terms)
        assert regrouped == sorted(t.string.labels for t in ham.terms)

    def test_group_count_matches_reference_greedy(self):
        ham = hubbard_hamiltonian(HubbardSpec(sites=6))
        ours = qubitwise_commuting_groups(ham)
        reference = greedy_groups_oracle(ham)
        assert len(ours) == len(reference)
        assert sorted(g.n_terms for g in ours) == sorted(
            len(g["terms"]) for g in reference
        )

    def test_empty_sum_rejected(self):
        with pytest.raises(ValueError):
            qubitwise_commuting_groups(PauliSum((), 2))


class TestDenseMatrix:
    def test_single_z(self):
        m = dense_matrix(PauliSum.from_labels([(1.0, "Z")]))
        assert np.allclose(m, np.diag([1.0, -1.0]))

    def test_minus_zz_diagonal(self):
        m = dense_matrix(PauliSum.from_labels([(-1.0, "ZZ")]))
        assert np.allclose(m, np.diag([-1.0, 1.0, 1.0, -1.0]))

    def test_three_qubit_chain_minimum(self):
        # Enumerate the 8 spin configurations by hand: min of
        # -(s0 s1 + s1 s2) over s in {+-1}^3 is -2.
        pairs = [(-1.0, "IZZ"), (-1.0, "ZZI")]
        m = dense_sum(pairs, 3)
        by_enumeration = min(
            -(s0 * s1 + s1 * s2)
            for s0 in (1, -1)
            for s1 in (1, -1)
            for s2 in (1, -1)
        )
        s = PauliSum.from_labels(pairs)
        assert np.allclose(dense_matrix(s), m)
        assert np.min(np.diag(dense_matrix(s)).real) == by_enumeration == -2

    def test_random_sums_match_kron_oracle(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 5))
            pairs = [
                (complex(rng.standard_normal(), rng.standard_normal()),
                 random_pauli_string(rng, n).to_label())
                for _ in range(4)
            ]
            s = PauliSum.from_labels(pairs)
            assert np.allclose(dense_matrix(s), dense_sum(pairs, n), atol=1e-12)

    def test_qubit_guard(self):
        s = PauliSum.from_terms([(1.0, PauliString.identity(15))], 15)
        with pytest.raises(ValueError):
            dense_matrix(s)

    def test_hermitian_tag_checks_coefficients(self):
        with pytest.raises(ValueError):
            PauliSum.from_labels([(1j, "X")], tag="hamiltonian")
        tagged = PauliSum.from_labels([(1.0, "X")], tag="hamiltonian")
        m = dense_matrix(tagged)
        assert np.max(np.abs(m - m.conj().T)) <= 1e-12

    def test_pauli_action_matches_matrix(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 5))
            s = random_pauli_string(rng, n)
            flip, phases = pauli_action(s)
            dim = 1 << n
            m = np.zeros((dim, dim), dtype=complex)
            cols = np.arange(dim)
            m[cols ^ flip, cols] = phases
            assert np.allclose(m, kron_from_label(s.to_label()), atol=1e-12)


class TestTextForm:
    def test_round_trip(self):
        s = PauliSum.from_labels([(-1.0, "ZZIII"), (0.25, "IIIXY")])
        entries = format_pauli_sum(simplify(s))
        # deterministic order: lexicographic in qubit-0-first label tuples
        assert entries == ["-1.0*ZZIII", "0.25*IIIXY"]
        back = parse_pauli_sum(entries)
        assert simplify(back).terms == simplify(s).terms

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            parse_pauli_sum(["1.0ZZ"])

    def test_rejects_complex(self):
        s = PauliSum.from_labels([(1j, "X")])
        with pytest.raises(ValueError):
            format_pauli_sum(s)

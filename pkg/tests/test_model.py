import numpy as np
import pytest

from mebd import linalg
from mebd.errors import BadSize
from mebd.hilbert import basis_index, pure_density, excitation_sector
from mebd.model import (
    CouplingKind,
    CouplingProfile,
    build_hdz,
    total_iz,
    verify_iz_commutation,
)


class TestCouplingProfile:
    def test_dipolar_decay(self):
        p = CouplingProfile(CouplingKind.ALL_PAIRS_DIPOLAR, 3)
        assert p.coupling(1, 2) == 1.0
        assert p.coupling(1, 3) == 1.0 / 8

    def test_nearest_neighbor(self):
        p = CouplingProfile(CouplingKind.NEAREST_NEIGHBOR, 4)
        assert p.coupling(2, 3) == 1.0
        assert p.coupling(1, 3) == 0.0


class TestBuildHdz:
    def test_two_site_elements(self):
        h = build_hdz(2, CouplingKind.NEAREST_NEIGHBOR).matrix
        assert abs(h[basis_index("01"), basis_index("10")] - 0.5) < 1e-15
        assert abs(h[basis_index("00"), basis_index("00")] - (-0.5)) < 1e-15

    @pytest.mark.parametrize("n,kind", [(3, CouplingKind.ALL_PAIRS_DIPOLAR),
                                        (5, CouplingKind.ALL_PAIRS_DIPOLAR),
                                        (4, CouplingKind.NEAREST_NEIGHBOR)])
    def test_ground_label_diagonal(self, n, kind):
        # <0..0|H|0..0> = -(1/2) sum_{i<j} D_ij from the ZZ term alone
        ham = build_hdz(n, kind)
        expected = -0.5 * sum(ham.profile.coupling(i, j)
                              for i in range(1, n + 1) for j in range(i + 1, n + 1))
        assert abs(ham.matrix[0, 0] - expected) < 1e-12

    def test_hermitian_and_real(self):
        h = build_hdz(4, CouplingKind.ALL_PAIRS_DIPOLAR).matrix
        assert np.max(np.abs(h - h.conj().T)) < 1e-12
        assert np.max(np.abs(h.imag)) == 0.0

    def test_commutes_with_iz(self):
        for n in (2, 4, 8):
            assert verify_iz_commutation(build_hdz(n)) < 1e-12

    def test_reflection_symmetry(self):
        n = 5
        h = build_hdz(n).matrix
        # permutation that reverses the chain
        perm = np.zeros(1 << n, dtype=int)
        for i in range(1 << n):
            bits = format(i, f"0{n}b")
            perm[i] = int(bits[::-1], 2)
        reflected = h[np.ix_(perm, perm)]
        assert np.max(np.abs(reflected - h)) < 1e-12

    def test_bad_size(self):
        with pytest.raises(BadSize):
            build_hdz(1)
        with pytest.raises(BadSize):
            build_hdz(13)


class TestTotalIz:
    def test_diagonal_values(self):
        iz = total_iz(2)
        assert iz[basis_index("00"), basis_index("00")] == 1.0
        assert iz[basis_index("11"), basis_index("11")] == -1.0
        assert iz[basis_index("10"), basis_index("10")] == 0.0
        assert np.max(np.abs(iz - np.diag(np.diag(iz)))) == 0.0


class TestVerifyIzCommutation:
    def test_detects_violation(self):
        ham = build_hdz(3)
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        perturb = np.kron(sx / 2, np.eye(4, dtype=complex))
        from mebd.model import Hamiltonian

        broken = Hamiltonian(matrix=ham.matrix + perturb, profile=ham.profile)
        assert verify_iz_commutation(broken) > 0.1


class TestSectorSupport:
    def test_evolution_stays_in_sector(self):
        n, label = 4, "1001"
        k = label.count("1")
        ham = build_hdz(n)
        sf = linalg.hermitian_eig(ham.matrix)
        rho0 = pure_density(label)
        sector = set(excitation_sector(n, k))
        outside = [i for i in range(1 << n) if i not in sector]
        for tau in np.linspace(0.0, 4.0, 9):
            rho = linalg.conjugate_evolution(rho0, linalg.propagator(sf, tau))
            leak = np.abs(rho[np.ix_(outside, outside)]).max()
            leak = max(leak, np.abs(rho[np.ix_(outside, sorted(sector))]).max())
            assert leak < 1e-10

    def test_product_state_not_entangled_at_tau_zero(self):
        from mebd.entanglement import mebd

        assert mebd(pure_density("1001")).value < 1e-10

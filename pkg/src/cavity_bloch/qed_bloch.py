"""QED-Bloch solver: Landau polaritons, the central equation in the combined
Fourier x polariton-level basis, its no-quantized-field limit, the Harper
chain and the polaritonic Harper chain.

Assembled matrices are row-major in (Fourier index, level index); Fourier
indices run -n_max..n_max.  Energies are joules unless a function explicitly
returns scaled dimensionless values.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .constants import HBAR, M_ELECTRON, E_CHARGE
from .errors import DomainError, NumericalError
from .numerics import hermitian_eigvals

#: scaled diagonal beyond which a polariton-lattice state is treated as
#: decoupled; far above it float64 eigensolving of the low window degrades
DIAG_SAFE_CAP = 1e9


@dataclass(frozen=True)
class PolaritonParams:
    """Derived parameters of the polaritonic coordinate transform."""

    omega_p: float
    omega_c: float

    def __post_init__(self):
        if self.omega_p <= 0.0 or self.omega_c <= 0.0:
            raise DomainError("polariton transform is singular at zero frequency")

    @property
    def m_p(self):
        """Photon mass-like parameter m_e/omega_p^2 (kg s^2)."""
        return M_ELECTRON / self.omega_p**2

    @property
    def m_c(self):
        return M_ELECTRON / self.omega_c**2

    @property
    def m_total(self):
        """Center-of-mass-like parameter M = (m_p + m_c)/2."""
        return 0.5 * (self.m_p + self.m_c)

    @property
    def inv_m_total(self):
        """1/M, overflow-safe in the omega_p -> 0 limit."""
        return (
            2.0
            * self.omega_p**2
            * self.omega_c**2
            / (M_ELECTRON * (self.omega_p**2 + self.omega_c**2))
        )

    @property
    def mu(self):
        """Relative-coordinate parameter mu = m_p m_c / M = 2 m_e / Omega^2."""
        return 2.0 * M_ELECTRON / self.big_omega**2

    @property
    def big_omega(self):
        """Polariton ladder frequency Omega = sqrt(omega_p^2 + omega_c^2)."""
        return math.hypot(self.omega_p, self.omega_c)

    @property
    def mp_over_m(self):
        """Bounded ratio m_p / M = 2 omega_c^2 / Omega^2 in (0, 2)."""
        return 2.0 * self.omega_c**2 / (self.omega_p**2 + self.omega_c**2)

    @property
    def g(self):
        """Light-matter coupling g = omega_p / omega_c."""
        return self.omega_p / self.omega_c


def polariton_params(omega_p, omega_c):
    return PolaritonParams(omega_p=omega_p, omega_c=omega_c)


def landau_polariton_energy(params, k_w, k_z, j, mass_ratio=1.0):
    """hbar^2 k_z^2/2m* + hbar^2 k_w^2/2M + hbar Omega (j + 1/2), in J."""
    if j < 0:
        raise DomainError("level index must be >= 0")
    mass = mass_ratio * M_ELECTRON
    return (
        HBAR**2 * k_z**2 / (2.0 * mass)
        + 0.5 * HBAR**2 * k_w**2 * params.inv_m_total
        + HBAR * params.big_omega * (j + 0.5)
    )


def landau_polariton_branches(b_fields, setup):
    """Upper/lower polariton branch frequencies (rad/s) over a field sweep.

    Upper branch: the ladder frequency Omega(B) = sqrt(omega_p^2 + omega_c^2),
    asymptotic to the cyclotron dispersion.  Lower branch: the ceiling of the
    k_w continuum, (omega_p/2) omega_c^2 / Omega^2, which saturates at
    omega_p/2 and stays below the bare cavity frequency.
    """
    b_fields = np.asarray(b_fields, dtype=float)
    omega_p = setup.omega_p
    omega_c = E_CHARGE * b_fields / (setup.mass_ratio * M_ELECTRON)
    omega2 = omega_p**2 + omega_c**2
    upper = np.sqrt(omega2)
    with np.errstate(invalid="ignore", divide="ignore"):
        lower = np.where(omega2 > 0.0, 0.5 * omega_p * omega_c**2 / omega2, 0.0)
    return {"omega_c": omega_c, "upper": upper, "lower": lower, "lp_ceiling": 0.5 * omega_p}


def screening_chi(g):
    """Magnetic-field screening chi(g) = (2 + 3g^2) / (2 (1+g^2)^{3/2}).

    The screened Landau ladder is hbar e B chi(g)/m_e (j + 1/2); the companion
    mass renormalization is m(g) = m / chi(g).
    """
    if g < 0.0:
        raise DomainError("coupling must be >= 0")
    return (2.0 + 3.0 * g**2) / (2.0 * (1.0 + g**2) ** 1.5)


@dataclass(frozen=True)
class BasisTruncation:
    """Fourier window |n|, |m| <= n_max and level window 0..j_max."""

    n_max: int
    j_max: int = 0
    dimension_cap: int = 20000

    def __post_init__(self):
        if self.n_max < 1:
            raise DomainError("n_max must be >= 1")
        if self.j_max < 0:
            raise DomainError("j_max must be >= 0")

    @property
    def n_count(self):
        return 2 * self.n_max + 1

    def dimension(self, fourier_dims=1):
        dim = self.n_count**fourier_dims * (self.j_max + 1)
        if dim > self.dimension_cap:
            raise DomainError(f"basis dimension {dim} exceeds cap {self.dimension_cap}")
        return dim


def alpha_matrix(dn, dm, lat, params):
    """Displacement amplitude alpha_{dn,dm} of the central equation.

    alpha = -sqrt(mu Omega/2 hbar) A^0_dn - i sqrt(hbar/2 mu Omega) G^v_{dm,dn}
    with A^0_dn = hbar G^x_dn/(sqrt(2) m_e) and
    G^v_{dm,dn} = m_p G_{dm,dn}/(sqrt(2) M omega_c).
    """
    mu_omega = params.mu * params.big_omega
    a0 = HBAR * lat.g_x(dn) / (math.sqrt(2.0) * M_ELECTRON)
    gv = params.mp_over_m * lat.g_oblique(dm, dn) / (math.sqrt(2.0) * params.omega_c)
    return -math.sqrt(mu_omega / (2.0 * HBAR)) * a0 - 1j * math.sqrt(HBAR / (2.0 * mu_omega)) * gv


def beta_matrix(dn, dm, lat, omega_c):
    """No-field-limit amplitude beta = sqrt(hbar/2 m_e omega_c)(-G^x_dn - i G_{dm,dn}).

    The omega_p -> 0 limit of alpha_matrix.
    """
    if omega_c <= 0.0:
        raise DomainError("cyclotron frequency must be positive")
    scale = math.sqrt(HBAR / (2.0 * M_ELECTRON * omega_c))
    return scale * (-lat.g_x(dn) - 1j * lat.g_oblique(dm, dn))


def _half_index_gx(lat, n, dn):
    """G^x at the exact half index (n + n')/2 = n - dn/2."""
    s = Fraction(2 * int(n) - int(dn), 2)
    return 2.0 * math.pi * float(s) / lat.a1


def _central_phases(lat, params, k_x, n_vals, dn, dm):
    """exp(-i G^v_{dm,dn} A^{k_x}_{(n+n')/2}) per row index n (n' = n - dn)."""
    # G^v A^{k_x}_s = (m_p/M) hbar G_{dm,dn} (k_x + G^x_s) / (2 omega_c m_e)
    scale = params.mp_over_m * HBAR / (2.0 * params.omega_c * M_ELECTRON)
    g_ob = lat.g_oblique(dm, dn)
    phases = np.empty(len(n_vals), dtype=np.complex128)
    for idx, n in enumerate(n_vals):
        gx_s = _half_index_gx(lat, n, dn)
        phases[idx] = np.exp(-1j * scale * g_ob * (k_x + gx_s))
    return phases


def assemble_central_matrix(pot, params, k_x, k_w, trunc, reduce_m=False):
    """QED-Bloch central-equation matrix for a 2D crystal in field + cavity.

    Basis (n, m, j): diagonal hbar^2 (k_w + G^w_{m,n})^2/2M + hbar Omega (j+1/2),
    couplings V_{dn,dm} exp(-i G^v A^{k_x}_{(n+n')/2}) <phi_i|D(alpha_{dn,dm})|phi_j>.

    With reduce_m=True the matrix is projected on the zero-Bloch-phase sector
    of the w-Fourier lattice (basis (n, j), couplings summed over dm) -- the
    sector that survives the no-quantized-field limit, where the m index
    becomes redundant.
    """
    lat = pot.lattice
    j_count = trunc.j_max + 1
    n_count = trunc.n_count
    n_vals = np.arange(-trunc.n_max, trunc.n_max + 1)
    ladder = HBAR * params.big_omega * (np.arange(j_count) + 0.5)

    blocks = {}
    for (dn, dm), v in pot.coefficients.items():
        alpha = alpha_matrix(dn, dm, lat, params)
        blocks[(dn, dm)] = v * kernels.displacement_block(j_count, alpha)

    if reduce_m:
        dim = trunc.dimension(fourier_dims=1)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for idx in range(n_count):
            for j in range(j_count):
                mat[idx * j_count + j, idx * j_count + j] = ladder[j]
        for (dn, dm), block in blocks.items():
            phases = _central_phases(lat, params, k_x, n_vals, dn, dm)
            kernels.fill_coupling(mat, n_count, j_count, dn, phases, block)
        return mat

    dim = trunc.dimension(fourier_dims=2)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    inv_m = params.inv_m_total
    sqrt2_wc = math.sqrt(2.0) * params.omega_c
    for i_n, n in enumerate(n_vals):
        for i_m, m in enumerate(n_vals):
            g_w = lat.g_oblique(m, n) / sqrt2_wc
            kinetic = 0.5 * HBAR**2 * (k_w + g_w) ** 2 * inv_m
            base = (i_n * n_count + i_m) * j_count
            for j in range(j_count):
                mat[base + j, base + j] = kinetic + ladder[j]
    for (dn, dm), block in blocks.items():
        phases = _central_phases(lat, params, k_x, n_vals, dn, dm)
        for i_n in range(n_count):
            ipr_n = i_n - dn
            if ipr_n < 0 or ipr_n >= n_count:
                continue
            for i_m in range(n_count):
                ipr_m = i_m - dm
                if ipr_m < 0 or ipr_m >= n_count:
                    continue
                r0 = (i_n * n_count + i_m) * j_count
                c0 = (ipr_n * n_count + ipr_m) * j_count
                mat[r0 : r0 + j_count, c0 : c0 + j_count] += phases[i_n] * block
    return mat


def assemble_llb_matrix(pot, omega_c, k_x, trunc, mass_ratio=1.0):
    """No-quantized-field central equation: Landau levels x Bloch waves.

    Basis (n, i): diagonal hbar omega_c (i + 1/2); couplings
    V_{dn,m'} exp(-i hbar (k_x + G^x_{(n+n')/2}) G_{m',dn} / (m omega_c))
    <phi_i|D(beta_{dn,m'})|phi_j>, summed over the potential's m' content.
    """
    if omega_c <= 0.0:
        raise DomainError("cyclotron frequency must be positive")
    lat = pot.lattice
    mass = mass_ratio * M_ELECTRON
    j_count = trunc.j_max + 1
    n_count = trunc.n_count
    n_vals = np.arange(-trunc.n_max, trunc.n_max + 1)
    dim = trunc.dimension(fourier_dims=1)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    ladder = HBAR * omega_c * (np.arange(j_count) + 0.5)
    for idx in range(n_count):
        for j in range(j_count):
            mat[idx * j_count + j, idx * j_count + j] = ladder[j]
    scale = math.sqrt(HBAR / (2.0 * mass * omega_c))
    for (dn, dm), v in pot.coefficients.items():
        beta = scale * (-lat.g_x(dn) - 1j * lat.g_oblique(dm, dn))
        block = v * kernels.displacement_block(j_count, beta)
        g_ob = lat.g_oblique(dm, dn)
        phases = np.empty(n_count, dtype=np.complex128)
        for idx, n in enumerate(n_vals):
            gx_s = _half_index_gx(lat, n, dn)
            phases[idx] = np.exp(-1j * HBAR * (k_x + gx_s) * g_ob / (mass * omega_c))
        kernels.fill_coupling(mat, n_count, j_count, dn, phases, block)
    return mat


def harper_hopping(flux, v_amplitude):
    """Flux-dependent hopping t(Phi) = V exp(-pi Phi0 / 2 Phi)."""
    if flux <= 0.0:
        raise DomainError("flux ratio must be positive")
    return v_amplitude * math.exp(-0.5 * math.pi / flux)


def harper_matrix(flux, kx_a, n_max):
    """Dimensionless Harper chain at crystal momentum k_x (kx_a = k_x * a).

    E U_n = U_{n-1} + U_{n+1} + 2 cos(2 pi (Phi0/Phi)(kx_a/2pi + n)) U_n over
    |n| <= n_max.
    """
    if flux <= 0.0:
        raise DomainError("flux ratio must be positive")
    n_vals = np.arange(-n_max, n_max + 1)
    diag = 2.0 * np.cos(2.0 * math.pi / flux * (kx_a / (2.0 * math.pi) + n_vals))
    mat = np.diag(diag)
    off = np.ones(len(n_vals) - 1)
    return mat + np.diag(off, 1) + np.diag(off, -1)


def harper_eigvals(flux, kx_a, n_max):
    """Ascending scaled Harper eigenvalues at one k point.

    Unscaled square-lattice energies follow as E = hbar omega_c / 2 +
    harper_hopping(flux, V) * eigenvalue.
    """
    return hermitian_eigvals(harper_matrix(flux, kx_a, n_max))


def harper_bloch_matrix(p, q, kappa, theta):
    """q x q Bloch reduction of the infinite Harper chain at reciprocal flux p/q.

    Diagonal 2 cos(2 pi p r / q + theta); every forward hop carries the chain
    Bloch phase e^{i kappa}, wrapping modulo q (q = 1 and q = 2, where both
    neighbors alias onto one element, come out automatically).
    """
    if q < 1 or p < 1:
        raise DomainError("need positive integers p, q")
    if math.gcd(p, q) != 1:
        raise DomainError("p/q must be in lowest terms")
    r = np.arange(q)
    mat = np.zeros((q, q), dtype=np.complex128)
    np.fill_diagonal(mat, 2.0 * np.cos(2.0 * math.pi * p / q * r + theta))
    fwd = np.exp(1j * kappa)
    for idx in range(q):
        mat[idx, (idx + 1) % q] += fwd
        mat[idx, (idx - 1) % q] += np.conj(fwd)
    return mat


def harper_exact_bands(p, q):
    """Exact band intervals of the Harper spectrum at reciprocal flux p/q.

    det(E - H(kappa, theta)) + 2 cos(q kappa) + 2 cos(q theta) = D(E) with a
    k-independent polynomial D, so the spectrum is {E : |D(E)| <= 4} and the
    band edges are the roots of D(E) = +-4.  Returns a (q, 2) array of
    [lower, upper] edges, ascending; for even q the two central intervals
    share an edge (the well-known band kissing).
    """
    kappa0, theta0 = 0.3137, 0.7477
    lam = np.linalg.eigvalsh(harper_bloch_matrix(p, q, kappa0, theta0))
    poly = np.poly(lam)  # det(E - H) at the reference point
    offset = 2.0 * math.cos(q * kappa0) + 2.0 * math.cos(q * theta0)
    edges = []
    for target in (4.0, -4.0):
        shifted = poly.copy()
        shifted[-1] += offset - target
        roots = np.roots(shifted)
        if np.max(np.abs(roots.imag)) > 1e-7:
            raise NumericalError(f"complex band-edge roots at p/q = {p}/{q}")
        edges.extend(np.sort(roots.real))
    edges = np.sort(np.asarray(edges))
    return edges.reshape(q, 2)


def harper_bloch_union(p, q, samples=200000):
    """Low-discrepancy sampling of the exact Harper spectrum at p/q.

    Batched diagonalization over a golden-ratio lattice in (kappa, theta);
    deterministic, and dense enough that intra-band spacings sit well below
    band-counting thresholds while measure-zero band touchings stay resolved.
    """
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    idx = np.arange(samples)
    kappa = (idx + 0.5) / samples * (2.0 * math.pi)
    theta = np.mod((idx + 0.5) * golden, 1.0) * (2.0 * math.pi)
    if q == 1:
        return np.sort(2.0 * np.cos(kappa) + 2.0 * np.cos(theta))
    r = np.arange(q)
    out = []
    for start in range(0, samples, 20000):
        ka = kappa[start : start + 20000]
        th = theta[start : start + 20000]
        mats = np.zeros((ka.size, q, q), dtype=np.complex128)
        diag = 2.0 * np.cos(2.0 * math.pi * p / q * r[None, :] + th[:, None])
        for i in range(q):
            mats[:, i, i] = diag[:, i]
        fwd = np.exp(1j * ka)
        for i in range(q):
            mats[:, i, (i + 1) % q] += fwd
            mats[:, i, (i - 1) % q] += np.conj(fwd)
        out.append(np.linalg.eigvalsh(mats).ravel())
    return np.sort(np.concatenate(out))


def polariton_hoppings(flux, g):
    """Scaled hoppings (t1/S, t2/S) of the polaritonic Harper equation.

    t1 = V0 exp(-pi Phi0/(2 Phi sqrt(1+g^2))), t2 with the 3/2 power,
    S = t1 + t2.  Evaluated in log space so deep suppression stays finite.
    """
    if flux <= 0.0:
        raise DomainError("flux ratio must be positive")
    if g < 0.0:
        raise DomainError("coupling must be >= 0")
    delta = _log_t2_minus_log_t1(flux, g)
    tau1 = 1.0 / (1.0 + math.exp(min(delta, 700.0)))
    return tau1, 1.0 - tau1


def _log_t2_minus_log_t1(flux, g):
    base = 0.5 * math.pi / flux
    one_plus = 1.0 + g * g
    return base * (1.0 / math.sqrt(one_plus) - 1.0 / one_plus**1.5)


def _log_s_over_v0(flux, g):
    """ln(S / V0) with S = t1 + t2."""
    base = 0.5 * math.pi / flux
    one_plus = 1.0 + g * g
    log_t2 = -base / one_plus**1.5
    delta = _log_t2_minus_log_t1(flux, g)
    return log_t2 + math.log1p(math.exp(-min(delta, 700.0)))


def polariton_scaled_kinetic(flux, g, kw_scaled, m, a1, v0):
    """Scaled diagonal kinetic term kinetic/S of the polariton lattice.

    kinetic = hbar^2 (kw_scaled + 2 pi m/a1)^2 / (2 m_e (1 + g^-2)) with
    kw_scaled = sqrt(2) omega_c k_w (1/m units); returns inf on float overflow.
    """
    if g == 0.0:
        return 0.0
    one_plus = 1.0 + g * g
    kin = (
        HBAR**2
        * (kw_scaled + 2.0 * math.pi * m / a1) ** 2
        / (2.0 * M_ELECTRON)
        * (g * g / one_plus)
    )
    if kin == 0.0:
        return 0.0
    log_scaled = math.log(kin / v0) - _log_s_over_v0(flux, g)
    if log_scaled > 700.0:
        return math.inf
    return math.exp(log_scaled)


#: below this coupling the m lattice is redundant (Harper limit) and the
#: reduced mode is exact to better than the g^2 flux renormalization
G_REDUCED_THRESHOLD = 1e-4

#: explicit matrix mode is only informative when the first m-ladder rung
#: disperses within this many scaled units of the spectral window
MATRIX_KINETIC_WINDOW = 1e2


def matrix_mode_informative(flux, g, a1, v0, kw_scaled=0.0):
    """True when the (n, m) lattice resolves physics the reduced chain cannot.

    The first m rung must sit within MATRIX_KINETIC_WINDOW scaled units of
    the band window; far above it the m ladder is inert and the published
    reduced treatment applies.
    """
    rung = min(
        polariton_scaled_kinetic(flux, g, kw_scaled, 1, a1, v0),
        polariton_scaled_kinetic(flux, g, kw_scaled, -1, a1, v0),
    )
    return rung <= MATRIX_KINETIC_WINDOW


def polariton_harper_eigvals(flux, g, kx_a, kw_scaled, trunc, a1, v0, mode="auto"):
    """Eigenvalues of the polaritonic Harper problem, ascending, scaled by
    S(Phi,g) = t1 + t2 and measured from the lowest polariton level.

    mode="matrix": explicit (n, m) lattice with the scaled kinetic diagonal;
    sound when that diagonal fits in float64 (order-one flux).
    mode="reduced": kinetic dropped and the m direction Bloch-reduced exactly,
    leaving a 1D anisotropic Harper chain with effective reciprocal flux
    (Phi0/Phi)/(1+g^2) -- the regime of the published small-flux coupling
    sweeps, where the scaled kinetic term dwarfs float64.
    mode="auto": reduced below G_REDUCED_THRESHOLD or when the matrix-mode
    diagonal would not be numerically sound, matrix otherwise.

    Returns (eigenvalues, mode_used).  g -> 0 is continuous in reduced mode
    (both hoppings -> 1/2, the Harper spectrum halved); the 1 + g^-2 overflow
    never occurs because the kinetic term is evaluated through g^2/(1+g^2).
    """
    if mode not in ("auto", "matrix", "reduced"):
        raise DomainError(f"unknown mode {mode!r}")
    if flux <= 0.0:
        raise DomainError("flux ratio must be positive")
    if g < 0.0:
        raise DomainError("coupling must be >= 0")
    tau1, tau2 = polariton_hoppings(flux, g)
    n_vals = np.arange(-trunc.n_max, trunc.n_max + 1)
    phase_arg = 2.0 * math.pi / (flux * (1.0 + g * g)) * (kx_a / (2.0 * math.pi) + n_vals)

    chosen = mode
    if mode == "auto":
        chosen = (
            "matrix"
            if g > G_REDUCED_THRESHOLD and matrix_mode_informative(flux, g, a1, v0, kw_scaled)
            else "reduced"
        )

    if chosen == "reduced":
        mat = np.diag(2.0 * tau2 * np.cos(phase_arg))
        off = tau1 * np.ones(len(n_vals) - 1)
        mat = mat + np.diag(off, 1) + np.diag(off, -1)
        return hermitian_eigvals(mat), "reduced"

    n_count = trunc.n_count
    dim = n_count * n_count
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for i_m, m in enumerate(n_vals):
        kin = min(polariton_scaled_kinetic(flux, g, kw_scaled, int(m), a1, v0), DIAG_SAFE_CAP)
        for i_n in range(n_count):
            mat[i_n * n_count + i_m, i_n * n_count + i_m] = kin
    for i_n in range(n_count):
        ph = np.exp(1j * phase_arg[i_n])
        for i_m in range(n_count):
            row = i_n * n_count + i_m
            if i_n + 1 < n_count:
                col = (i_n + 1) * n_count + i_m
                mat[row, col] = tau1
                mat[col, row] = tau1
            if i_m + 1 < n_count:
                col = i_n * n_count + i_m + 1
                mat[row, col] = tau2 * ph
                mat[col, row] = tau2 * np.conj(ph)
    return hermitian_eigvals(mat), "matrix"


@dataclass
class SpectrumGrid:
    """Sweep container: axis samples x k points x ascending eigenvalues."""

    axis_name: str
    axis_values: np.ndarray
    k_labels: list
    eigenvalues: list  # [axis][k] -> ascending ndarray
    metadata: dict
    failures: list

    def flat_rows(self):
        """Deterministic (axis index, k index, eigen index, value) rows."""
        for a_idx, per_axis in enumerate(self.eigenvalues):
            for k_idx, eigs in enumerate(per_axis):
                for e_idx, val in enumerate(eigs):
                    yield a_idx, k_idx, e_idx, float(val)

    def union(self, a_idx):
        """All eigenvalues of one axis point, k-concatenated then sorted."""
        return np.sort(np.concatenate(self.eigenvalues[a_idx]))


def sweep(assembler, axis_name, axis_values, k_grid, threads=1, metadata=None):
    """Run `assembler(axis_value, k) -> ascending eigenvalues` over an axis
    and a k grid, in parallel, with a merge independent of execution order.

    Per-point failures are recorded and the sweep continues; the summary
    lives in SpectrumGrid.failures.
    """
    axis_values = np.asarray(axis_values, dtype=float)
    if axis_values.size == 0:
        raise DomainError("empty sweep axis")
    if np.any(np.diff(axis_values) < 0.0):
        raise DomainError("sweep axis must be monotone")
    k_grid = list(k_grid)
    tasks = [(a_idx, k_idx) for a_idx in range(axis_values.size) for k_idx in range(len(k_grid))]

    def run_task(task):
        a_idx, k_idx = task
        try:
            return a_idx, k_idx, np.asarray(assembler(axis_values[a_idx], k_grid[k_idx])), None
        except Exception as exc:  # per-point failure, recorded not raised
            return a_idx, k_idx, None, f"axis[{a_idx}]={axis_values[a_idx]:g}, k[{k_idx}]: {exc}"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]

    eigenvalues = [[np.empty(0) for _ in k_grid] for _ in range(axis_values.size)]
    failures = []
    for a_idx, k_idx, eigs, err in results:
        if err is not None:
            failures.append(err)
        else:
            eigenvalues[a_idx][k_idx] = eigs
    return SpectrumGrid(
        axis_name=axis_name,
        axis_values=axis_values,
        k_labels=[tuple(np.atleast_1d(k)) for k in k_grid],
        eigenvalues=eigenvalues,
        metadata=dict(metadata or {}),
        failures=failures,
    )


def midpoint_kx_grid(lat, points):
    """k_x * a1 values at midpoints of a uniform Brillouin-zone grid.

    Midpoints avoid the measure-zero band-touching momenta of even-q
    Hofstadter spectra, keeping gap counting well defined on finite grids.
    """
    if points < 1:
        raise DomainError("need at least one k point")
    step = 2.0 * math.pi / points
    return (-math.pi + (np.arange(points) + 0.5) * step).tolist()


def count_bands(values, gap_threshold):
    """Number of clusters separated by gaps larger than gap_threshold."""
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        return 0
    return int(1 + np.sum(np.diff(values) > gap_threshold))


def spectral_gaps(values, gap_threshold):
    """(lower, upper) edges of every internal gap wider than gap_threshold."""
    values = np.sort(np.asarray(values, dtype=float))
    gaps = []
    diffs = np.diff(values)
    for idx in np.nonzero(diffs > gap_threshold)[0]:
        gaps.append((float(values[idx]), float(values[idx + 1])))
    return gaps


def coupling_window_end(g_values, gap_counts, fraction=0.25):
    """Band-splitting window end from a coupling sweep's gap counts.

    The butterfly regime shows a rich plateau of spectral gaps; beyond the
    window the spectrum collapses toward the bare polariton ladder and the
    count drops.  A 3-point median tames isolated rational-flux spikes; the
    window ends at the first post-peak drop below `fraction` of the peak.
    """
    g_values = np.asarray(g_values, dtype=float)
    counts = np.asarray(gap_counts, dtype=float)
    if g_values.shape != counts.shape or g_values.size < 3:
        raise DomainError("need matching g and count arrays of length >= 3")
    smooth = np.array(
        [np.median(counts[max(0, i - 1) : i + 2]) for i in range(counts.size)]
    )
    peak_idx = int(np.argmax(smooth))
    peak = smooth[peak_idx]
    if peak < 2.0:
        return float(g_values[0])
    cutoff = fraction * peak
    for idx in range(peak_idx, counts.size):
        if smooth[idx] < cutoff:
            return float(g_values[idx])
    return float(g_values[-1])

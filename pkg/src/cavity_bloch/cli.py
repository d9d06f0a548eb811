"""Command-line entry point: `cavity-bloch <command> --config <file> ...`.

Exit codes: 0 success, 2 invalid config, 3 numerical failure, 4 I/O failure.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import cavity_gas, eft, landau, qed_bloch, response
from .config import COMMANDS, FORMATS, parse_config
from .constants import EV, HBAR, THZ
from .errors import CavityBlochError, ConfigError, NumericalError
from .lattice import (
    CENTERED_RECT_THETA,
    Lattice2D,
    bravais_cosine_potential,
    field_for_flux_ratio,
    flux_ratio,
    mtg_flux_condition,
)
from .numerics import hermitian_eigvals
from .output import ResultEnvelope, ScalarPayload, TablePayload, export

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _lattice_from(params):
    kind = params["kind"]
    theta = params.get("theta_deg")
    if kind == "square":
        theta = math.pi / 2.0
    elif kind == "rectangular":
        theta = math.pi / 2.0
    elif kind == "hexagonal":
        theta = math.pi / 3.0
    elif kind == "centered-rectangular" and (theta is None or math.isclose(theta, math.pi / 2)):
        theta = CENTERED_RECT_THETA
    return Lattice2D(params["a1_angstrom"], params["a2_angstrom"], theta)


def _setup_from(params):
    return cavity_gas.CavitySetup(
        omega_cav=params["cavity_thz"],
        n2d=params["density_cm2"],
        mass_ratio=params.get("mass_ratio", 1.0),
    )


def _run_gas(cfg):
    setup = _setup_from(cfg.parameters)
    area = cfg.parameters["area_um2"]
    gamma = setup.gamma
    gamma_prime, no_a2_class = cavity_gas.no_a2_coupling(setup.omega_cav, setup.omega_p)
    disk = landau.fermi_2d(setup.n2d, setup.mass_ratio)
    values = {
        "omega_cav[rad/s]": setup.omega_cav,
        "omega_p[rad/s]": setup.omega_p,
        "omega_tilde[rad/s]": setup.omega_tilde,
        "mirror_distance[m]": setup.l_z,
        "gamma[1]": gamma,
        "phase[class]": cavity_gas.stability_classify(gamma),
        "gamma_no_a2[1]": gamma_prime,
        "phase_no_a2[class]": no_a2_class,
        "photon_occupation_per_polarization[1]": cavity_gas.ground_state_photon_occupation(
            setup.omega_cav, setup.omega_p
        ),
        "n_electrons[1]": setup.n2d * area,
        "fermi_momentum[1/m]": disk["k_F"],
        "gs_energy_density[J/m^2]": disk["energy_density"],
    }
    return ScalarPayload(values=values)


def _run_response(cfg):
    setup = _setup_from(cfg.parameters)
    wt = setup.omega_tilde
    grid = response.default_grid(wt, cfg.parameters["points"], cfg.parameters["span"])
    eta = cfg.parameters["eta_fraction"] * wt
    # per unit mirror area: V -> L_z and N -> n2d leave every N/V ratio intact
    volume = setup.l_z
    n_electrons = setup.n2d
    aa = response.chi_aa(grid, eta, wt, volume)
    ea = response.chi_ea(grid, eta, wt, volume)
    jj = response.chi_jj(grid, eta, setup, n_electrons, volume)
    mixed = response.chi_mixed(grid, eta, setup, n_electrons, volume)
    rows = [
        [float(w), v_aa.real, v_aa.imag, v_ea.real, v_ea.imag, v_jj.real, v_jj.imag,
         v_m.real, v_m.imag]
        for w, v_aa, v_ea, v_jj, v_m in zip(grid, aa.value, ea.value, jj.value, mixed.value)
    ]
    columns = [
        "w[rad/s]",
        "re_chi_aa[s^2/(F m^2)]", "im_chi_aa[s^2/(F m^2)]",
        "re_chi_ea[s/(F m^2)]", "im_chi_ea[s/(F m^2)]",
        "re_chi_jj[C^4 s^2/(kg^2 F m^2)]", "im_chi_jj[C^4 s^2/(kg^2 F m^2)]",
        "re_chi_ja[C^2 s^2/(kg F m^2)]", "im_chi_ja[C^2 s^2/(kg F m^2)]",
    ]
    return TablePayload(columns=columns, rows=rows)


def _run_conductivity(cfg):
    setup = _setup_from(cfg.parameters)
    wt = setup.omega_tilde
    grid = response.default_grid(wt, cfg.parameters["points"], cfg.parameters["span"])
    eta = cfg.parameters["eta_fraction"] * wt
    sigma = response.optical_conductivity(grid, eta, setup)
    ratio, mass = response.dc_suppression(setup.gamma)
    rows = [[float(w), v.real, v.imag, ratio, mass] for w, v in zip(grid, sigma.value)]
    columns = [
        "w[rad/s]", "re_sigma[S/m]", "im_sigma[S/m]",
        "dc_ratio[1]", "mass_enhancement[1]",
    ]
    return TablePayload(columns=columns, rows=rows)


def _run_eft(cfg):
    p = cfg.parameters
    setup = eft.EftSetup(
        l_z=p["lz_mm"], n2d=p["density_cm2"], n_electrons=p["n_electrons"],
        lambda0=p["lambda0"], mass_ratio=p["mass_ratio"],
    )
    from .constants import C_LIGHT, EPSILON_0

    k_f = landau.fermi_2d(setup.n2d, setup.mass_ratio)["k_F"]
    values = {
        "alpha[1]": setup.alpha,
        "effective_coupling[1]": eft.effective_coupling(setup),
        "lower_cutoff[rad^2/s^2]": setup.omega_tilde_kz**2,
        "cutoff[rad^2/s^2]": setup.cutoff,
        "landau_pole[rad^2/s^2]": eft.landau_pole(setup),
        "renormalized_mass[kg]": eft.renormalized_mass(setup),
        "mass_enhancement[1]": eft.renormalized_mass(setup) / setup.mass,
        "chemical_potential[J]": eft.chemical_potential(setup, k_f),
        "casimir_pressure[N/m^2]": eft.casimir_pressure(setup),
        "absorption_plateau[s^2/(F m^2)]": 1.0 / (4.0 * C_LIGHT**2 * EPSILON_0 * setup.l_z),
    }
    return ScalarPayload(values=values)


def _run_landau(cfg):
    p = cfg.parameters
    b = p["b_tesla"]
    n2d = p["density_cm2"]
    mass_ratio = p["mass_ratio"]
    w_c = landau.cyclotron_frequency(b, mass_ratio)
    nu = landau.filling_factor(n2d, b)
    sigma_xy, sigma_yy = landau.hall_conductance(int(nu))
    eta = p["eta_fraction"] * HBAR * w_c
    energies = np.linspace(0.0, HBAR * w_c * (p["n_max"] + 1), p["points"])
    dos = landau.landau_dos(energies, b, eta, p["n_max"], mass_ratio)
    # long format: scalar context rows first, then the DOS grid
    rows = [
        ["cyclotron_frequency[rad/s]", "", w_c],
        ["filling_factor[1]", "", nu],
        ["hall_conductance_at_floor_filling[S]", "", sigma_xy],
        ["longitudinal_conductance[S]", "", sigma_yy],
    ]
    rows += [["dos[1/(eV m^2)]", float(e) / EV, float(d) * EV] for e, d in zip(energies, dos)]
    return TablePayload(columns=["quantity[name]", "energy[eV]", "value[unit-in-name]"], rows=rows)


def _run_polariton(cfg):
    p = cfg.parameters
    setup = _setup_from(p)
    b_fields = np.linspace(p["b_min_tesla"], p["b_max_tesla"], p["points"])
    branches = qed_bloch.landau_polariton_branches(b_fields, setup)
    rows = [
        [float(b), float(wc) / THZ, float(up) / THZ, float(lo) / THZ]
        for b, wc, up, lo in zip(b_fields, branches["omega_c"], branches["upper"],
                                 branches["lower"])
    ]
    columns = [
        "b_field[T]", "cyclotron[1e12 rad/s]",
        "upper_polariton[1e12 rad/s]", "lower_polariton[1e12 rad/s]",
    ]
    return TablePayload(columns=columns, rows=rows)


def _run_butterfly(cfg):
    p = cfg.parameters
    lat = _lattice_from(p)
    pot = bravais_cosine_potential(p["kind"], p["v0_ev"], lat)
    trunc = qed_bloch.BasisTruncation(n_max=p["n_max"], j_max=p["j_max"])
    kx_grid = qed_bloch.midpoint_kx_grid(lat, p["kx_points"])
    scaling = p.get("scaling") or "raw-joules"
    flux_values = np.linspace(p["flux_min"], p["flux_max"], p["points"])

    if scaling == "harper-scaled":

        def assembler(flux, kx_a):
            return qed_bloch.harper_eigvals(flux, kx_a, trunc.n_max)

        unit = "scaled[1]"
    else:

        def assembler(flux, kx_a):
            b = field_for_flux_ratio(lat, flux)
            w_c = landau.cyclotron_frequency(b)
            mat = qed_bloch.assemble_llb_matrix(pot, w_c, kx_a / lat.a1, trunc)
            return hermitian_eigvals(mat) / EV

        unit = "energy[eV]"

    grid = qed_bloch.sweep(
        assembler, "flux_ratio", flux_values, kx_grid, threads=cfg.threads,
        metadata={"scaling": scaling, "n_max": trunc.n_max, "j_max": trunc.j_max,
                  "kind": p["kind"], "kx_points": p["kx_points"]},
    )
    rows = [[float(flux_values[a]), k, e, v] for a, k, e, v in grid.flat_rows()]
    columns = ["flux_ratio[1]", "k_index[1]", "eig_index[1]", unit]
    payload = TablePayload(columns=columns, rows=rows)
    payload.kind = "spectrum"
    return payload, grid


def _run_polariton_butterfly(cfg):
    p = cfg.parameters
    lat = _lattice_from(p)
    if p["kind"] != "square":
        raise ConfigError(["[lattice] the polaritonic Harper sweep is defined on the square lattice"])
    trunc = qed_bloch.BasisTruncation(n_max=p["n_max"], j_max=0)
    kx_grid = qed_bloch.midpoint_kx_grid(lat, p["kx_points"])
    kw_count = p["kw_points"]
    kw_grid = [0.0] if kw_count == 1 else list(
        np.linspace(0.0, 2.0 * math.pi / lat.a1, kw_count, endpoint=False)
    )
    k_grid = [(kx, kw) for kx in kx_grid for kw in kw_grid]
    g_values = np.linspace(p["g_min"], p["g_max"], p["points"])
    if g_values[0] == 0.0:
        g_values = g_values.copy()
        g_values[0] = 1e-12  # continuous Harper limit, transform singular at exactly 0
    modes_seen = set()

    def assembler(g, k):
        kx_a, kw_scaled = k
        vals, used = qed_bloch.polariton_harper_eigvals(
            p["flux_ratio"], g, kx_a, kw_scaled, trunc, a1=lat.a1, v0=p["v0_ev"],
            mode=p["mode"],
        )
        modes_seen.add(used)
        return vals

    grid = qed_bloch.sweep(
        assembler, "coupling_g", g_values, k_grid, threads=cfg.threads,
        metadata={"flux_ratio": p["flux_ratio"], "n_max": trunc.n_max,
                  "scaling": "polariton-scaled", "kx_points": p["kx_points"],
                  "kw_points": kw_count, "solver_mode": p["mode"]},
    )
    grid.metadata["kinetic_modes_used"] = sorted(modes_seen)
    rows = [[float(g_values[a]), k, e, v] for a, k, e, v in grid.flat_rows()]
    columns = ["coupling_g[1]", "k_index[1]", "eig_index[1]", "scaled[1]"]
    payload = TablePayload(columns=columns, rows=rows)
    payload.kind = "spectrum"
    return payload, grid


def _run_mtg(cfg):
    p = cfg.parameters
    lat = _lattice_from(p)
    if p.get("b_tesla") is not None:
        b = p["b_tesla"]
    else:
        b = field_for_flux_ratio(lat, p["flux_ratio"])
    verdict, residual = mtg_flux_condition(lat, b, p["p"])
    values = {
        "b_field[T]": b,
        "flux_ratio[1]": flux_ratio(lat, b),
        "enlargement_p[1]": p["p"],
        "verdict[class]": verdict,
        "residual[1]": residual,
    }
    return ScalarPayload(values=values)


def run(cfg):
    """Dispatch a validated config; returns a ResultEnvelope."""
    handlers = {
        "gas": _run_gas,
        "response": _run_response,
        "conductivity": _run_conductivity,
        "eft": _run_eft,
        "landau": _run_landau,
        "polariton": _run_polariton,
        "mtg-check": _run_mtg,
    }
    if cfg.command in handlers:
        payload = handlers[cfg.command](cfg)
    elif cfg.command == "butterfly":
        payload, _ = _run_butterfly(cfg)
    elif cfg.command == "polariton-butterfly":
        payload, _ = _run_polariton_butterfly(cfg)
    else:  # pragma: no cover - parse_config guards the command set
        raise ConfigError([f"unknown command {cfg.command!r}"])
    return ResultEnvelope(
        config_text=cfg.source_text, command=cfg.command, payload=payload, seed=cfg.seed
    )


def _plot_window(cfg):
    lo = cfg.parameters.get("emin_ev")
    hi = cfg.parameters.get("emax_ev")
    if lo is None and hi is None:
        return None
    return (lo, hi)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="cavity-bloch",
        description="Cavity-QED condensed matter solvers: gas, response, EFT, butterflies.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="path to the INI-style config file")
    parser.add_argument("--out", default=None, help="output path (overrides [output] path)")
    parser.add_argument("--format", default=None, choices=FORMATS,
                        help="output format (overrides [output] format)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: CAVITY_BLOCH_THREADS or 1)")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed recorded for sampled property runs")
    args = parser.parse_args(argv)

    try:
        with open(args.config, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"cannot read config {args.config}: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"config error: {violation}", file=sys.stderr)
        return EXIT_CONFIG

    if cfg.command != args.command:
        print(
            f"config error: [run] command = {cfg.command!r} does not match "
            f"the CLI command {args.command!r}",
            file=sys.stderr,
        )
        return EXIT_CONFIG

    overrides = {}
    if args.threads is not None:
        overrides["threads"] = args.threads
    elif os.environ.get("CAVITY_BLOCH_THREADS"):
        try:
            overrides["threads"] = int(os.environ["CAVITY_BLOCH_THREADS"])
        except ValueError:
            print("config error: CAVITY_BLOCH_THREADS must be an integer", file=sys.stderr)
            return EXIT_CONFIG
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        cfg = type(cfg)(
            command=cfg.command, parameters=cfg.parameters, output_path=cfg.output_path,
            output_format=cfg.output_format, source_text=cfg.source_text,
            seed=overrides.get("seed", cfg.seed), threads=overrides.get("threads", cfg.threads),
        )

    try:
        envelope = run(cfg)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"config error: {violation}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, CavityBlochError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    out_path = args.out or cfg.output_path
    out_format = args.format or cfg.output_format
    try:
        export(envelope, out_path, out_format, window=_plot_window(cfg))
    except CavityBlochError as exc:
        print(f"output failure: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {out_format} to {out_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

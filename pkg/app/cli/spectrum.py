"""`spectrum`: eigenvalues of one density, or eigenvalue curves over a pier grid."""

import logging

from app.cli.common import make_writer, pier_values, resolve_density, use_exact_solver
from app.config.settings import Settings
from app.core.closed_form import eigenfunction_closed_form, find_eigenvalues
from app.core.density import Density, PierLayout
from app.core.galerkin import solve_weighted_spectrum, weighted_inner
from app.schemas.records import SpectrumRow
from app.schemas.run import RunConfig
from app.utils.constants import EXIT_OK

logger = logging.getLogger(__name__)


def exact_rows(density: Density, layout: PierLayout, count: int) -> list[SpectrumRow]:
    rows = []
    for index, root in enumerate(find_eigenvalues(density, layout, count), start=1):
        shape = eigenfunction_closed_form(root, density, layout)
        rows.append(
            SpectrumRow(
                index=index,
                parity=root.parity,
                mu=root.mu,
                lam=root.lam,
                norm_check=shape.inner(shape, density) - 1.0,
            )
        )
    return rows


def galerkin_rows(density: Density, layout: PierLayout, count: int) -> list[SpectrumRow]:
    spectrum = solve_weighted_spectrum(density, layout, count=count)
    return [
        SpectrumRow(
            index=j,
            parity=spectrum.parities[j - 1],
            lam=float(spectrum.eigenvalues[j - 1]),
            norm_check=weighted_inner(spectrum, j, j) - 1.0,
        )
        for j in range(1, spectrum.count + 1)
    ]


def run(config: RunConfig, settings: Settings) -> int:
    """Write spectrum.csv: index, parity, mu, lambda, norm_check, and a for pier grids."""
    count = settings.spectrum.mode_count
    exact = use_exact_solver(config)
    rows: list[SpectrumRow] = []
    for a in pier_values(config):
        layout = PierLayout(a)
        resolved = resolve_density(config, layout, settings)
        found = exact_rows(resolved.density, layout, count) if exact else galerkin_rows(
            resolved.density, layout, count
        )
        if config.a_grid:
            found = [row.model_copy(update={"a": a}) for row in found]
        rows.extend(found)
        logger.info(
            f"Spectrum at a={a}: lambda_1={found[0].lam:.6g}, lambda_{count}={found[-1].lam:.6g} "
            f"({'closed form' if exact else 'Galerkin'})"
        )

    columns = None if config.a_grid else [f for f in SpectrumRow.model_fields if f != "a"]
    make_writer(config, settings).write_records("spectrum.csv", rows, columns)
    return EXIT_OK

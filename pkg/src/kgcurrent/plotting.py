"""Figure rendering for the report path.

All figures go through the Agg backend straight to files; nothing here
ever opens a window.  Style is deliberately uniform: density solid,
reference density dash-dot, indefinite zero-component dashed.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_RC = {
    "figure.figsize": (7.0, 4.2),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def density_figure(x, rho, rho_born, j0_kg, path, window=None):
    """Overlay of the three densities; `window` clips the x-range."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(x, rho, "-", label="rho", lw=1.6)
        ax.plot(x, rho_born, "-.", label="rho_born", lw=1.2)
        ax.plot(x, j0_kg, "--", label="j0_kg", lw=1.2)
        if window is not None:
            ax.set_xlim(-window, window)
        ax.set_xlabel("x")
        ax.set_ylabel("density")
        ax.legend(frameon=False)
        return _save(fig, path)


def chi_figure(sigmas, chis, path):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.loglog(sigmas, chis, "o-", lw=1.4)
        ax.set_xlabel("sigma_p")
        ax.set_ylabel("chi")
        return _save(fig, path)


def tof_figure(p, g, born_g, path):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(p, g, "-", label="g (time of flight)", lw=1.6)
        ax.plot(p, born_g, "-.", label="|phi~|^2", lw=1.2)
        ax.set_xlabel("p")
        ax.set_ylabel("momentum density")
        ax.legend(frameon=False)
        return _save(fig, path)


def delta_figure(results, path):
    """Overlay of the localization family members, labeled by n."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for r in results:
            ax.plot(r.x, r.rho, "-", lw=1.2, label=f"n = {r.n:g}")
        ax.set_xlabel("x")
        ax.set_ylabel("rho_n")
        ax.legend(frameon=False)
        return _save(fig, path)

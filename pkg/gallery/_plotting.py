"""Optional matplotlib helpers shared by the gallery scripts."""
import pathlib

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:  # plotting is optional, the data is printed regardless
    plt = None

OUTPUT = pathlib.Path(__file__).resolve().parent / "_output"


def save(fig, name):
    OUTPUT.mkdir(exist_ok=True)
    path = OUTPUT / name
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    print(f"wrote {path}")

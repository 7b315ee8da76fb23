"""
States command.

Print the state catalogue with closed-form purities and class thresholds.
"""
import tabulate

from qpurity.helper import get_maxcolwidth, get_style
from qpurity.states import ALL_STATES, alpha_threshold, is_rotation_invariant, true_purity


def list_states(wrap: bool) -> None:
    """List the catalogued states built with their example parameters."""
    headers = ("Name", "Parameters", "Purity", "Class threshold (r=2)", "Rotation invariant", "Description")
    maxcolwidth = get_maxcolwidth(headers, wrap)
    style = get_style()
    data = []
    for name, entry in ALL_STATES.items():
        state = entry()
        params = ", ".join(f"{key}={value:g}" for key, value in state.params.items())
        data.append(
            (
                name,
                params or "-",
                f"{true_purity(state):.7f}",
                f"α < {alpha_threshold(state):.4g}",
                "yes" if is_rotation_invariant(state) else "no",
                entry.description,
            )
        )
    print(
        tabulate.tabulate(
            headers=headers,
            tabular_data=data,
            tablefmt=style,
            maxcolwidths=maxcolwidth,
            maxheadercolwidths=maxcolwidth,
        )
    )

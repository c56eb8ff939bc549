"""CSV number formatting shared by the CLI and metric writers."""
import numbers


def fmt(x) -> str:
    """Integers verbatim, floats at 6 significant digits."""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, numbers.Integral):
        return str(int(x))
    value = float(x)
    if value == 0:
        return "0"
    return f"{value:.6g}"

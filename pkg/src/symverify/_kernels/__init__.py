"""Backend selection for the Monte Carlo sampling core.

Prefers the compiled extension; falls back to the vectorized NumPy twin
when the extension is absent.  Set SYMVERIFY_BACKEND=python or =cython to
force a choice (forcing cython raises if the extension did not build).
Both backends produce bit-identical event streams.
"""

import os

_forced = os.environ.get("SYMVERIFY_BACKEND", "").lower()

if _forced == "python":
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        if _forced == "cython":
            raise
        from . import _fallback as _impl

        BACKEND = "python"

stream_uniforms = _impl.stream_uniforms
sample_symmetrized = _impl.sample_symmetrized
sample_mixture = _impl.sample_mixture

__all__ = ["BACKEND", "stream_uniforms", "sample_symmetrized", "sample_mixture"]

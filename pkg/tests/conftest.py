from __future__ import annotations

from hypothesis import settings

settings.register_profile("k3cm", max_examples=60, deadline=None)
settings.load_profile("k3cm")

"""posebooth: a self-hostable body-prompting installation.

Visitors pick a source artwork at a kiosk, pose before a camera, and a
pose-conditioned generation pipeline produces a reimagined artwork in the
source's style. Ships with a deterministic mock backend, a live result
feed, and an offline coding/statistics toolkit.
"""

__version__ = "0.1.0"

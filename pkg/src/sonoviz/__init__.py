"""sonoviz: prompt-authored, sound-reactive 2D vector visualizations.

Subpackages:
  audio   - chunked sound feature extraction (dominant frequency, RMS)
  script  - the shape-script language: compiler and sandboxed interpreter
  agents  - the enhance/generate/check authoring pipeline
  hub     - WebSocket wire protocol and broadcast hub
  session - the orchestrating scheduler and serve loop
"""

__version__ = "0.1.0"

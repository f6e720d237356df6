"""Conditional spatio-temporal generative modelling of 4-D cardiac anatomy.

The package covers the full desk-scale workflow: phantom corpus generation
(`cheart.datakit`), the conditional beta-VAE with a recurrent temporal module
(`cheart.model`), training and inference procedures (`cheart.engine`), the
evaluation suite (`cheart.metrics`), a PCA completion baseline
(`cheart.baselines`) and a CLI plus HTTP service (`cheart.interface`).
"""

__version__ = "0.1.0"

"""Desk-scale laboratory for cross-scale knowledge transfer between
toy transformer language models.

The package trains small decoder-only models from scratch, derives
vocabulary-anchored semantic bases from the LM-head pseudoinverse,
builds cross-dimension supervisory targets by decomposing teacher hidden
states and recomposing them in the student's latent space, and trains a
single student block against a two-term cosine objective. Seeking- and
LaTen-style parameter-space transfer baselines and CKA representation
analysis round out the lab.

Entry points:
    semalign.pipeline.run_pipeline  -- full experiment from one config
    semalign.cli.main               -- the ``semalign`` command
"""

__version__ = "0.1.0"

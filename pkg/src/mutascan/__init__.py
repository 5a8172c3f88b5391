"""mutascan: sequence toolkit for mutation-based disease screening.

Pipeline: adopt a normal reference gene by homology search gated on GC
content, align it against a patient gene, call and classify mutations,
and score malignant candidates with a small feed-forward network.
"""

__version__ = "0.1.0"

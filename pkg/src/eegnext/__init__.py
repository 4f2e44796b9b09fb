"""EEG scalogram classification pipeline.

Stages: EDF ingestion into trials, per-subject Euclidean-space alignment,
complex-wavelet scalograms, a CPU ConvNeXt-style backbone with head
finetuning, and cross-subject k-fold evaluation.
"""

__version__ = "0.1.0"

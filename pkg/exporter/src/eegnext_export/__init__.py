"""ConvNeXt-tiny checkpoint conversion to EEGW archives + EEGF fixtures."""

__version__ = "0.1.0"

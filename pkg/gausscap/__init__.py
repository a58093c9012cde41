# Gaussian channel capacity toolkit
__version__ = "1.0.0"

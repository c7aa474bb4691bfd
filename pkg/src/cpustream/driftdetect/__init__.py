from .Adwin import AdwinDetector, DriftSignal, adwin_cut_threshold

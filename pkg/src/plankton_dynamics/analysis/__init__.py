# Fixed points, stability, invariant regions and Neimark-Sacker analysis

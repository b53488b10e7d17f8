"""Source-code similarity analysis toolkit.

Ingests a corpus of submissions, computes pairwise distance matrices by
compression and token-frequency metrics, flags statistically surprising
pairs with a robust outlier test, and serves evidence views (threshold
graph, histograms, dendrogram, side-by-side fragments) to a local UI.
"""

__version__ = "0.1.0"

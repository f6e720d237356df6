from .pca import PCAModel, load_pca, make_pca_completer, pca_complete, pca_fit, save_pca

__all__ = ["PCAModel", "load_pca", "make_pca_completer", "pca_complete", "pca_fit", "save_pca"]

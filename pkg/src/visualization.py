import io
import logging
import warnings

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap

from .curvegeom import BoundaryCurve, windings

logger = logging.getLogger(__name__)

RASTER_SIZE = 200
PADDING = 0.1
ON_CURVE = 4


class WindingPlotter:
    def __init__(self, size=RASTER_SIZE, nodes=4096):
        self.size = size
        self.nodes = nodes
        # 0 white, 1 light, 2 medium, >=3 dark, on-curve gray
        self.palette = ListedColormap(['#ffffff', '#c6dbef', '#6baed6', '#08306b', '#9e9e9e'])

    def bounding_box(self, curve):
        """Curve bounding box padded by 10% on each side"""
        x, y = curve.nodes.real, curve.nodes.imag
        width = max(x.max() - x.min(), 1e-12)
        height = max(y.max() - y.min(), 1e-12)
        return (x.min() - PADDING * width, x.max() + PADDING * width,
                y.min() - PADDING * height, y.max() + PADDING * height)

    def winding_raster(self, s):
        """Palette index per cell: min(winding, 3), or ON_CURVE near the curve"""
        curve = BoundaryCurve.from_symbol(s, self.nodes)
        xmin, xmax, ymin, ymax = self.bounding_box(curve)
        dx = (xmax - xmin) / self.size
        dy = (ymax - ymin) / self.size
        xs = xmin + (np.arange(self.size) + 0.5) * dx
        ys = ymin + (np.arange(self.size) + 0.5) * dy
        centers = (xs[None, :] + 1j * ys[:, None]).ravel()

        raster = np.full(centers.size, ON_CURVE, dtype=int)
        clear = curve.distance(centers) > 0.5 * np.hypot(dx, dy)
        raster[clear] = np.clip(windings(curve, centers[clear]), 0, 3)
        logger.debug("raster of %r: %d of %d cells off the curve", s.label, int(clear.sum()), centers.size)
        return raster.reshape(self.size, self.size), (xmin, xmax, ymin, ymax), curve

    def plot_windings(self, s):
        """Winding raster with the boundary curve drawn on top"""
        raster, extent, curve = self.winding_raster(s)
        fig, ax = plt.subplots(figsize=(6, 6))
        ax.imshow(raster, origin='lower', extent=extent, cmap=self.palette, vmin=-0.5, vmax=4.5,
                  interpolation='nearest')
        closed = np.append(curve.nodes, curve.nodes[0])
        ax.plot(closed.real, closed.imag, color='black', linewidth=0.8)
        ax.set_aspect('equal')
        ax.set_title(f"Winding numbers of {s.label or 'phi'}(circle)")
        ax.set_xlabel('Re w')
        ax.set_ylabel('Im w')
        return fig

    def to_svg(self, s):
        """Deterministic SVG document of plot_windings"""
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            with matplotlib.rc_context({'svg.hashsalt': 'toeplitz-lab', 'svg.fonttype': 'path'}):
                fig = self.plot_windings(s)
                buffer = io.StringIO()
                fig.savefig(buffer, format='svg', metadata={'Date': None})
                plt.close(fig)
        return buffer.getvalue()


def plot(s, cfg):
    return WindingPlotter(nodes=cfg.nodes).to_svg(s)

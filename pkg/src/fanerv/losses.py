"""Training losses and evaluation metrics.

The spatial loss mixes mean absolute error with multi-scale structural
similarity; the frequency loss penalizes the L1 difference of FFT spectra
(real and imaginary parts separately, averaged over all bins). The total
objective is ``loss_spa + mu * loss_fft``.
"""

import math
from dataclasses import dataclass

import torch
import torch.nn.functional as F

from .wavelet import fft2d

# standard five-scale MS-SSIM weights
MS_SSIM_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)


@dataclass
class LossConfig:
    alpha: float = 0.7
    mu: float = 70.0
    ms_ssim_scales: int = 5
    ms_ssim_window: int = 11
    ms_ssim_sigma: float = 1.5

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.mu < 0.0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")


def _as_batched(x: torch.Tensor) -> torch.Tensor:
    if x.ndim == 3:
        return x.unsqueeze(0)
    if x.ndim == 4:
        return x
    raise ValueError(f"expected (C,H,W) or (B,C,H,W), got shape {tuple(x.shape)}")


def _check_pair(pred: torch.Tensor, target: torch.Tensor):
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: pred {tuple(pred.shape)} vs target {tuple(target.shape)}")


def _gaussian_window(size: int, sigma: float, dtype, device) -> torch.Tensor:
    coords = torch.arange(size, dtype=dtype, device=device) - (size - 1) / 2.0
    g = torch.exp(-(coords**2) / (2.0 * sigma**2))
    return g / g.sum()


def _blur(x: torch.Tensor, win: torch.Tensor) -> torch.Tensor:
    # separable valid-mode gaussian filter, per channel
    c = x.shape[1]
    kh = win.view(1, 1, -1, 1).expand(c, 1, -1, 1)
    kw = win.view(1, 1, 1, -1).expand(c, 1, 1, -1)
    return F.conv2d(F.conv2d(x, kh, groups=c), kw, groups=c)


def _ssim_terms(x, y, win, k1=0.01, k2=0.03):
    c1 = k1**2
    c2 = k2**2
    mu_x = _blur(x, win)
    mu_y = _blur(y, win)
    sigma_x = _blur(x * x, win) - mu_x * mu_x
    sigma_y = _blur(y * y, win) - mu_y * mu_y
    sigma_xy = _blur(x * y, win) - mu_x * mu_y
    cs = (2 * sigma_xy + c2) / (sigma_x + sigma_y + c2)
    ssim = ((2 * mu_x * mu_y + c1) / (mu_x * mu_x + mu_y * mu_y + c1)) * cs
    return ssim.mean(), cs.mean()


def usable_scales(h: int, w: int, window: int, max_scales: int) -> int:
    """How many dyadic scales fit: the coarsest level must still hold one window."""
    n = 0
    while n < max_scales and min(h, w) >= window:
        n += 1
        h //= 2
        w //= 2
    return n


def ms_ssim(pred: torch.Tensor, target: torch.Tensor, cfg: LossConfig | None = None) -> torch.Tensor:
    """Multi-scale SSIM with the standard five-scale weights.

    For images too small for five dyadic scales the scale count is reduced
    and the remaining weights renormalized. Contrast/structure terms are
    clamped at zero before exponentiation (the usual stabilization), so the
    result lies in [0, 1] and equals 1 only for identical inputs.
    """
    cfg = cfg or LossConfig()
    pred = _as_batched(pred)
    target = _as_batched(target)
    _check_pair(pred, target)

    h, w = pred.shape[-2:]
    window = cfg.ms_ssim_window
    scales = usable_scales(h, w, window, cfg.ms_ssim_scales)
    if scales == 0:
        raise ValueError(f"image {h}x{w} smaller than one {window}x{window} window")
    weights = torch.tensor(MS_SSIM_WEIGHTS[:scales], dtype=pred.dtype, device=pred.device)
    weights = weights / weights.sum()

    win = _gaussian_window(window, cfg.ms_ssim_sigma, pred.dtype, pred.device)
    x, y = pred, target
    terms = []
    for i in range(scales):
        ssim_val, cs_val = _ssim_terms(x, y, win)
        terms.append(F.relu(ssim_val if i == scales - 1 else cs_val))
        if i < scales - 1:
            x = F.avg_pool2d(x, 2)
            y = F.avg_pool2d(y, 2)
    return torch.prod(torch.stack(terms) ** weights)


def loss_spa(pred: torch.Tensor, target: torch.Tensor, cfg: LossConfig | None = None) -> torch.Tensor:
    """alpha * L1 + (1 - alpha) * (1 - MS-SSIM)."""
    cfg = cfg or LossConfig()
    _check_pair(pred, target)
    out = cfg.alpha * (pred - target).abs().mean()
    if cfg.alpha < 1.0:
        out = out + (1.0 - cfg.alpha) * (1.0 - ms_ssim(pred, target, cfg))
    return out


def loss_fft(pred: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    """Mean over all spectrum bins of |Re(delta)| + |Im(delta)|."""
    _check_pair(pred, target)
    delta = fft2d(pred) - fft2d(target)
    return (delta.real.abs() + delta.imag.abs()).mean()


def loss_total(pred: torch.Tensor, target: torch.Tensor, cfg: LossConfig | None = None) -> torch.Tensor:
    cfg = cfg or LossConfig()
    out = loss_spa(pred, target, cfg)
    if cfg.mu > 0.0:
        out = out + cfg.mu * loss_fft(pred, target)
    return out


def psnr(pred: torch.Tensor, target: torch.Tensor) -> float:
    """10*log10(1/MSE) for [0,1] frames; identical inputs give float('inf')."""
    _check_pair(pred, target)
    mse = float(torch.mean((pred.double() - target.double()) ** 2))
    if mse == 0.0:
        return float("inf")
    return 10.0 * math.log10(1.0 / mse)

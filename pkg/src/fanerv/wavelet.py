"""Single-level 2-D Haar analysis/synthesis and the FFT used by the frequency loss.

Feature maps are torch tensors whose last two dimensions are spatial
(``(..., H, W)``), so the same functions serve ``(C, H, W)`` frames and
``(B, C, H, W)`` activations. The transform is orthonormal: each 2x2 block
is mapped with an orthogonal matrix scaled by 1/2, so energy is preserved
and ``haar_idwt2d`` is the exact inverse of ``haar_dwt2d``. All operations
are pure tensor arithmetic and fully differentiable.
"""

from typing import NamedTuple

import torch


class Subbands(NamedTuple):
    """The four half-resolution Haar subbands of a feature map.

    ``a_ll`` is the approximation band; ``h_lr``, ``v_rl`` and ``d_rr`` hold
    the horizontal, vertical and diagonal detail. All four share one shape.
    """

    a_ll: torch.Tensor
    h_lr: torch.Tensor
    v_rl: torch.Tensor
    d_rr: torch.Tensor


def haar_dwt2d(x: torch.Tensor) -> Subbands:
    """Decompose ``x`` into four orthonormal Haar subbands.

    Args:
        x: tensor of shape ``(..., H, W)`` with even ``H`` and ``W``.

    Returns:
        :class:`Subbands` of shape ``(..., H/2, W/2)`` each. For a 2x2 block
        ``[[a, b], [c, d]]`` the coefficients are ``(a+b+c+d)/2``,
        ``(a-b+c-d)/2``, ``(a+b-c-d)/2`` and ``(a-b-c+d)/2``.
    """
    if x.ndim < 2:
        raise ValueError(f"expected at least 2 dimensions, got shape {tuple(x.shape)}")
    h, w = x.shape[-2], x.shape[-1]
    if h % 2 or w % 2:
        raise ValueError(f"spatial dims must be even for the Haar DWT, got {h}x{w}")

    a = x[..., 0::2, 0::2]
    b = x[..., 0::2, 1::2]
    c = x[..., 1::2, 0::2]
    d = x[..., 1::2, 1::2]

    a_ll = (a + b + c + d) * 0.5
    h_lr = (a - b + c - d) * 0.5
    v_rl = (a + b - c - d) * 0.5
    d_rr = (a - b - c + d) * 0.5
    return Subbands(a_ll, h_lr, v_rl, d_rr)


def haar_idwt2d(s: Subbands) -> torch.Tensor:
    """Merge four subbands back into a full-resolution map.

    Exact inverse of :func:`haar_dwt2d`; output shape is ``(..., 2H, 2W)``.
    """
    a_ll, h_lr, v_rl, d_rr = s
    for name, band in zip(("h_lr", "v_rl", "d_rr"), (h_lr, v_rl, d_rr)):
        if band.shape != a_ll.shape:
            raise ValueError(
                f"subband shape mismatch: a_ll {tuple(a_ll.shape)} vs {name} {tuple(band.shape)}"
            )

    a = (a_ll + h_lr + v_rl + d_rr) * 0.5
    b = (a_ll - h_lr + v_rl - d_rr) * 0.5
    c = (a_ll + h_lr - v_rl - d_rr) * 0.5
    d = (a_ll - h_lr - v_rl + d_rr) * 0.5

    h, w = a_ll.shape[-2], a_ll.shape[-1]
    lead = a_ll.shape[:-2]
    top = torch.stack((a, b), dim=-1).reshape(*lead, h, 2 * w)
    bottom = torch.stack((c, d), dim=-1).reshape(*lead, h, 2 * w)
    return torch.stack((top, bottom), dim=-2).reshape(*lead, 2 * h, 2 * w)


def fft2d(x: torch.Tensor) -> torch.Tensor:
    """Unnormalized 2-D DFT over the last two dimensions, DC at index (0, 0)."""
    return torch.fft.fft2(x, dim=(-2, -1), norm="backward")

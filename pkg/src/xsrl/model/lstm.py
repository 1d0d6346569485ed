"""Multi-layer bidirectional LSTM on a single flattened parameter vector.

All recurrent weights live in one 1-D array so they can either be trained
directly or generated from a language embedding.  Layout, documented for
checkpoint portability: blocks are layer-major with the forward direction
before the backward one; each block is [W_x (4H x D), W_h (4H x H), b (4H)]
flattened row-major; the 4H axis stacks the input, forget, cell and output
gates in that order.  Layer 0 consumes the feature vectors (dimension D);
deeper layers consume the previous layer's concatenated states (2H).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LstmSpec", "bilstm_forward", "bilstm_backward"]


@dataclass(frozen=True)
class LstmSpec:
    input_dim: int
    hidden: int
    layers: int

    def layer_input_dim(self, layer: int) -> int:
        return self.input_dim if layer == 0 else 2 * self.hidden

    def block_size(self, layer: int) -> int:
        h = self.hidden
        return 4 * h * self.layer_input_dim(layer) + 4 * h * h + 4 * h

    @property
    def total_params(self) -> int:
        return sum(2 * self.block_size(layer) for layer in range(self.layers))

    def views(self, flat: np.ndarray):
        """Slice one flat vector into per-(layer, direction) weight views.

        Returns ``[[ (W_x, W_h, b) forward, (W_x, W_h, b) backward ], ...]``.
        Views share memory with ``flat``, so writes through them land in it.
        """
        if flat.shape != (self.total_params,):
            raise ValueError(
                f"parameter vector has length {flat.shape}, expected "
                f"({self.total_params},)")
        h = self.hidden
        out = []
        offset = 0
        for layer in range(self.layers):
            d = self.layer_input_dim(layer)
            directions = []
            for _ in range(2):
                w_x = flat[offset:offset + 4 * h * d].reshape(4 * h, d)
                offset += 4 * h * d
                w_h = flat[offset:offset + 4 * h * h].reshape(4 * h, h)
                offset += 4 * h * h
                b = flat[offset:offset + 4 * h]
                offset += 4 * h
                directions.append((w_x, w_h, b))
            out.append(directions)
        return out

    def forget_bias_offsets(self) -> list[tuple[int, int]]:
        """(start, end) ranges of every forget-gate bias segment in the flat vector."""
        h = self.hidden
        pairs = []
        offset = 0
        for layer in range(self.layers):
            d = self.layer_input_dim(layer)
            for _ in range(2):
                offset += 4 * h * d + 4 * h * h
                pairs.append((offset + h, offset + 2 * h))
                offset += 4 * h
        return pairs


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _cell_forward(w_x, w_h, b, inputs):
    """Run one direction over ``inputs`` (n, D); returns states and cache."""
    n = inputs.shape[0]
    h = w_h.shape[1]
    gates = np.empty((n, 4 * h), dtype=inputs.dtype)
    cells = np.empty((n, h), dtype=inputs.dtype)
    states = np.empty((n, h), dtype=inputs.dtype)
    zx = inputs @ w_x.T + b
    h_prev = np.zeros(h, dtype=inputs.dtype)
    c_prev = np.zeros(h, dtype=inputs.dtype)
    for t in range(n):
        z = zx[t] + w_h @ h_prev
        i = _sigmoid(z[:h])
        f = _sigmoid(z[h:2 * h])
        g = np.tanh(z[2 * h:3 * h])
        o = _sigmoid(z[3 * h:])
        c = f * c_prev + i * g
        gates[t, :h], gates[t, h:2 * h] = i, f
        gates[t, 2 * h:3 * h], gates[t, 3 * h:] = g, o
        cells[t] = c
        states[t] = o * np.tanh(c)
        h_prev, c_prev = states[t], c
    return states, (inputs, gates, cells, states)


def _cell_backward(w_x, w_h, cache, d_states):
    """Backprop one direction; returns d_inputs and parameter gradients."""
    inputs, gates, cells, states = cache
    n, h = cells.shape
    d_wx = np.zeros_like(w_x)
    d_wh = np.zeros_like(w_h)
    d_b = np.zeros(4 * h, dtype=inputs.dtype)
    d_inputs = np.empty_like(inputs)
    dh_next = np.zeros(h, dtype=inputs.dtype)
    dc_next = np.zeros(h, dtype=inputs.dtype)
    for t in range(n - 1, -1, -1):
        i, f = gates[t, :h], gates[t, h:2 * h]
        g, o = gates[t, 2 * h:3 * h], gates[t, 3 * h:]
        c_prev = cells[t - 1] if t > 0 else np.zeros(h, dtype=inputs.dtype)
        h_prev = states[t - 1] if t > 0 else np.zeros(h, dtype=inputs.dtype)
        tc = np.tanh(cells[t])
        dh = d_states[t] + dh_next
        dc = dh * o * (1.0 - tc * tc) + dc_next
        dz = np.concatenate([
            dc * g * i * (1.0 - i),
            dc * c_prev * f * (1.0 - f),
            dc * i * (1.0 - g * g),
            dh * tc * o * (1.0 - o),
        ])
        d_wx += np.outer(dz, inputs[t])
        d_wh += np.outer(dz, h_prev)
        d_b += dz
        d_inputs[t] = w_x.T @ dz
        dh_next = w_h.T @ dz
        dc_next = dc * f
    return d_inputs, d_wx, d_wh, d_b


def bilstm_forward(spec: LstmSpec, flat: np.ndarray, inputs: np.ndarray):
    """Encode ``inputs`` (n, input_dim) into (n, 2*hidden) states.

    Returns (states, caches); pass ``caches`` to :func:`bilstm_backward`.
    """
    caches = []
    layer_in = inputs
    for layer_views in spec.views(flat):
        (wx_f, wh_f, b_f), (wx_b, wh_b, b_b) = layer_views
        fwd, cache_f = _cell_forward(wx_f, wh_f, b_f, layer_in)
        bwd_rev, cache_b = _cell_forward(wx_b, wh_b, b_b, layer_in[::-1])
        caches.append((cache_f, cache_b))
        layer_in = np.concatenate([fwd, bwd_rev[::-1]], axis=1)
    return layer_in, caches


def bilstm_backward(spec: LstmSpec, flat: np.ndarray, caches, d_out: np.ndarray):
    """Backprop through the stack; returns (d_inputs, d_flat)."""
    h = spec.hidden
    d_flat = np.zeros_like(flat)
    d_views = spec.views(d_flat)
    views = spec.views(flat)
    d_layer = d_out
    for layer in range(spec.layers - 1, -1, -1):
        (wx_f, wh_f, _), (wx_b, wh_b, _) = views[layer]
        cache_f, cache_b = caches[layer]
        d_in_f, d_wxf, d_whf, d_bf = _cell_backward(wx_f, wh_f, cache_f, d_layer[:, :h])
        d_in_b, d_wxb, d_whb, d_bb = _cell_backward(wx_b, wh_b, cache_b, d_layer[::-1, h:])
        (vwx_f, vwh_f, vb_f), (vwx_b, vwh_b, vb_b) = d_views[layer]
        vwx_f += d_wxf
        vwh_f += d_whf
        vb_f += d_bf
        vwx_b += d_wxb
        vwh_b += d_whb
        vb_b += d_bb
        d_layer = d_in_f + d_in_b[::-1]
    return d_layer, d_flat

"""Gate fidelity of the four-site CNOT with every edge phase 0.2, inputs a=c=0.5.

Independent of the library: explicit numpy kron/diagonal/contraction.
"""
import numpy as np

def state(a):
    return np.array([a, np.sqrt(1 - a * a)], dtype=complex)

def fidelity(c, t, thetas):
    plus = np.ones(2) / np.sqrt(2)
    psi = np.kron(np.kron(np.kron(t, plus), c), plus)   # sites 1..4, site 1 = MSB
    for z in range(16):
        bits = [(z >> (4 - s)) & 1 for s in range(1, 5)]
        for k, th in enumerate(thetas):
            if bits[k] and bits[k + 1]:
                psi[z] *= -np.exp(1j * th)
    t4 = psi.reshape(2, 2, 2, 2)                         # (s1, s2, s3, s4)
    out = np.einsum("i,k,ijkl->lj", plus, plus, t4)      # (site 4, site 2)
    out = out.reshape(4)
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    out = np.kron(h, h) @ out
    out /= np.linalg.norm(out)
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    ideal = cnot @ np.kron(c, t)
    return abs(np.vdot(ideal, out)) ** 2

if __name__ == "__main__":
    q = state(0.5)
    print(f"{fidelity(q, q, [0.2] * 3):.15f}")
    print(f"{fidelity(q, q, [np.pi] * 3):.15f}")

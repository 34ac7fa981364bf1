import numpy as np, itertools
def chain(th):
    n=len(th)+1; psi=np.zeros(2**n,complex)
    for z in range(2**n):
        b=[(z>>(n-1-k))&1 for k in range(n)]
        psi[z]=np.prod([(-np.exp(1j*th[j]))**(b[j]*b[j+1]) for j in range(n-1)])
    return psi/np.sqrt(2**n)
def red(psi,n,i,j):
    t=psi.reshape([2]*n); rest=[k for k in range(n) if k not in (i-1,j-1)]
    t=np.transpose(t,[i-1,j-1]+rest).reshape(4,-1); return t@t.conj().T
def conc(r):
    yy=np.kron([[0,-1j],[1j,0]],[[0,-1j],[1j,0]])
    ev=np.sqrt(np.abs(np.linalg.eigvals(r@yy@r.conj()@yy))); ev=np.sort(ev)[::-1]
    return max(0,ev[0]-ev[1]-ev[2]-ev[3])
x,w=np.polynomial.hermite_e.hermegauss(40); w=w/w.sum()
for s in np.arange(0.1,1.01,0.1):
    r=sum(wa*wb*red(chain([s*a,s*b]),3,1,2) for a,wa in zip(x,w) for b,wb in zip(x,w))
    print(round(s,1), conc(r))
for t1 in [0,np.pi/2,np.pi]:
  for t2 in [0,np.pi/4,np.pi/2,np.pi]:
    print(t1,t2,conc(red(chain([t1,t2]),3,1,2)))
import mpmath as mp
mp.mp.dps=40
def conc_mp(r):
    R=mp.matrix(r.tolist()); yy=mp.matrix(np.real(np.kron([[0,-1j],[1j,0]],[[0,-1j],[1j,0]])).tolist())
    Rc=mp.matrix([[mp.conj(R[i,j]) for j in range(4)] for i in range(4)])
    ev,_=mp.eig(R*yy*Rc*yy); a=sorted([mp.sqrt(abs(mp.re(e))) for e in ev],reverse=True)
    return max(0,a[0]-a[1]-a[2]-a[3])
print("mp")
for s in np.arange(0.1,1.01,0.1):
    r=sum(wa*wb*red(chain([s*a,s*b]),3,1,2) for a,wa in zip(x,w) for b,wb in zip(x,w))
    print(round(s,1), mp.nstr(conc_mp(r),13))
print("grid")
for t1,t2 in [(0,np.pi/4),(np.pi/2,np.pi/4),(np.pi/2,np.pi)]:
    print(t1,t2,mp.nstr(conc_mp(red(chain([t1,t2]),3,1,2)),13))

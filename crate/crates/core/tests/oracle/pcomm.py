# Dense oracle for ||[P, lambda_a]|| and for the exact (dense) ||[lambda_g, Q]||.
import numpy as np, sys
sys.path.insert(0,'/tmp/oracle')
from pvv import *
def etap(k,x,N):
    v={}
    if k>0: v[mul(pw('a',k-N),x)]=np.sqrt(k/N)
    v[mul(pw('a',k),x)]=v.get(mul(pw('a',k),x),0)+np.sqrt((N-k)/N)
    return v
def comm_norm(vecs,g):
    gi=INV[g]
    words=set()
    for v in vecs:
        for w in v: words|={w,mul(g,w),mul(gi,w)}
    words=sorted(words); ix={w:i for i,w in enumerate(words)}; n=len(words)
    Pm=np.zeros((n,n),complex)
    for v in vecs:
        u=np.zeros(n,complex)
        for w,c in v.items(): u[ix[w]]=c
        Pm+=np.outer(u,u.conj())
    L=np.zeros((n,n))
    for w in words:
        if mul(g,w) in ix: L[ix[mul(g,w)],ix[w]]=1
    # restrict to columns whose image stays inside the window
    C=L@Pm-Pm@L
    return np.linalg.norm(C,2), n
if __name__=='__main__':
    for N,R in [(4,1),(8,1),(64,1),(64,2),(100,1)]:
        vs=[etap(k,x,N) for k,x in F(N,R)]
        print('P',N,R,repr(comm_norm(vs,'a')[0]), 'bound',N**-0.5)
    for N,R in [(12,1),(10,2)]:
        vs=[eta(k,x,N) for k,x in F(N,R)]
        print('Q',N,R,repr(comm_norm(vs,'a')[0]),repr(comm_norm(vs,'b')[0]))

import numpy as np, itertools, sys
INV={'a':'A','A':'a','b':'B','B':'b'}
def red(w):
    out=[]
    for c in w:
        if out and out[-1]==INV[c]: out.pop()
        else: out.append(c)
    return ''.join(out)
def mul(x,y): return red(x+y)
def pw(c,n): return (c*n) if n>=0 else (INV[c]*(-n))
def alpha(x): return x.translate(str.maketrans('aAbB','bBaA'))
def ball(R):
    words=['']
    frontier=['']
    for n in range(R):
        nf=[]
        for w in frontier:
            for c in 'aAbB':
                if w and w[-1]==INV[c]: continue
                nf.append(w+c)
        words+=nf; frontier=nf
    return words
A=(1+1j)/2; B=(1-1j)/2
def F(N,R):
    xs=[w for w in ball(R) if w=='' or w[0] in 'bB']
    return [(k,x) for k in range(N) for x in xs]
def eta(k,x,N):
    v={}
    def add(w,c):
        v[w]=v.get(w,0)+c
    if k==0:
        add(x,A); add(alpha(x),B)
    else:
        s1=np.sqrt(k/N); s2=np.sqrt((N-k)/N)
        add(mul(pw('a',k-N),x),s1*A); add(mul(pw('b',k-N),alpha(x)),s1*B)
        add(mul(pw('a',k),x),s2*A); add(mul(pw('b',k),alpha(x)),s2*B)
    return {w:c for w,c in v.items() if abs(c)>1e-15}
def lam(g,v): return {mul(g,w):c for w,c in v.items()}
def tmat(N,R,g):
    pairs=F(N,R); idx={p:i for i,p in enumerate(pairs)}
    etas=[eta(k,x,N) for k,x in pairs]
    where={}
    for i,e in enumerate(etas):
        for w,c in e.items(): where.setdefault(w,[]).append((i,c))
    n=len(pairs); T=np.zeros((n,n),complex)
    for j,e in enumerate(etas):
        for w,c in lam(g,e).items():
            for i,ci in where.get(w,[]):
                T[i,j]+=ci*np.conj(c)
    return pairs,T
if __name__=='__main__':
    R=int(sys.argv[1]) if len(sys.argv)>1 else 1
    for N in [int(a) for a in sys.argv[2:]] or [50,100,200,400]:
        res={}
        for g in 'aAbB':
            pairs,T=tmat(N,R,g)
            lm=np.linalg.eigvalsh(T.conj().T@T)[0]
            res[g]=lm
        na=np.sqrt(1-min(res['a'],res['A'])); nb=np.sqrt(1-min(res['b'],res['B']))
        print(N,R,repr(na),repr(nb),{k:repr(v) for k,v in res.items()})

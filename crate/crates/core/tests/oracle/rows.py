from pvv import *
import sys
N=int(sys.argv[1]); R=int(sys.argv[2]); g=sys.argv[3]
pairs,T=tmat(N,R,g)
sel=sys.argv[4:]
for i,(k,x) in enumerate(pairs):
    key=f"{k},{x or 'e'}"
    if sel and not any(key==s for s in sel): continue
    nz=[(pairs[j],T[i,j]) for j in range(len(pairs)) if abs(T[i,j])>1e-12]
    print(key, [ (f"{p[0]},{p[1] or 'e'}", complex(round(v.real,5),round(v.imag,5))) for p,v in nz])

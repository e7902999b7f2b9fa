# invol algebra kernel: polynomials, endomorphisms, membership, tame automorphisms

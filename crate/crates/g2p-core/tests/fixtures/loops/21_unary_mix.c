for (i = 0; i < n; i++)
    b[i] = -a[i] + !c[i];

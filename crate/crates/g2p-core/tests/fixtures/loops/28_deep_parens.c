for (i = 0; i < n; i++)
    r[i] = ((a[i] + b[i]) * (c[i] - d[i])) / (e[i] + 1);

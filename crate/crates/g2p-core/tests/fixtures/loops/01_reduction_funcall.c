for (i = 0; i < 30000000; i++)
    error = error + fabs(a[i] - a[i + 1]);

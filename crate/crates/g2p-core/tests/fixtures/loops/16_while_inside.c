for (i = 0; i < n; i++) {
    while (work > 0)
        work = work - 1;
    a[i] = work;
}

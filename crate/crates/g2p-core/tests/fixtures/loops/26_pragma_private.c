#pragma omp parallel for private(tmp)
for (i = 0; i < n; i++) {
    tmp = b[i];
    a[i] = tmp * tmp;
}

for (i = 0; i < 12; i++) {
    for (j = 0; j < 12; j++) {
        for (k = 0; k < 12; k++) {
            tmp1 = 6.0 / m;
            a[i][j][k] = tmp1 + 4;
        }
    }
}

"""Fully symmetric triangle quadrature tables (generated by tools/gen_triangle_rules.py).

Each entry maps exactness degree -> (barycentric nodes, weights summing to 1).
"""

TABLE = {
    1: (
        [
            (0.3333333333333333, 0.3333333333333333, 0.3333333333333333),
        ],
        [1.0],
    ),
    2: (
        [
            (0.16666666666666666, 0.16666666666666666, 0.6666666666666667),
            (0.16666666666666666, 0.6666666666666667, 0.16666666666666666),
            (0.6666666666666667, 0.16666666666666666, 0.16666666666666666),
        ],
        [0.3333333333333333, 0.3333333333333333, 0.3333333333333333],
    ),
    4: (
        [
            (0.44594849091596467, 0.44594849091596467, 0.10810301816807066),
            (0.44594849091596467, 0.10810301816807066, 0.44594849091596467),
            (0.10810301816807066, 0.44594849091596467, 0.44594849091596467),
            (0.09157621350977112, 0.09157621350977112, 0.8168475729804577),
            (0.09157621350977112, 0.8168475729804577, 0.09157621350977112),
            (0.8168475729804577, 0.09157621350977112, 0.09157621350977112),
        ],
        [0.2233815896780109, 0.2233815896780109, 0.2233815896780109, 0.10995174365532247, 0.10995174365532247, 0.10995174365532247],
    ),
    5: (
        [
            (0.3333333333333333, 0.3333333333333333, 0.3333333333333333),
            (0.10128650732345669, 0.10128650732345669, 0.7974269853530866),
            (0.10128650732345669, 0.7974269853530866, 0.10128650732345669),
            (0.7974269853530866, 0.10128650732345669, 0.10128650732345669),
            (0.4701420641051163, 0.4701420641051163, 0.05971587178976745),
            (0.4701420641051163, 0.05971587178976745, 0.4701420641051163),
            (0.05971587178976745, 0.4701420641051163, 0.4701420641051163),
        ],
        [0.22500000000000717, 0.12593918054482778, 0.12593918054482778, 0.12593918054482778, 0.13239415278850317, 0.13239415278850317, 0.13239415278850317],
    ),
    6: (
        [
            (0.06308901449150345, 0.06308901449150345, 0.8738219710169931),
            (0.06308901449150345, 0.8738219710169931, 0.06308901449150345),
            (0.8738219710169931, 0.06308901449150345, 0.06308901449150345),
            (0.24928674517090837, 0.24928674517090837, 0.5014265096581833),
            (0.24928674517090837, 0.5014265096581833, 0.24928674517090837),
            (0.5014265096581833, 0.24928674517090837, 0.24928674517090837),
            (0.31035245103378717, 0.6365024991213968, 0.05314504984481605),
            (0.31035245103378717, 0.05314504984481605, 0.6365024991213968),
            (0.6365024991213968, 0.31035245103378717, 0.05314504984481605),
            (0.6365024991213968, 0.05314504984481605, 0.31035245103378717),
            (0.05314504984481605, 0.31035245103378717, 0.6365024991213968),
            (0.05314504984481605, 0.6365024991213968, 0.31035245103378717),
        ],
        [0.050844906370208436, 0.050844906370208436, 0.050844906370208436, 0.11678627572638221, 0.11678627572638221, 0.11678627572638221, 0.08285107561837134, 0.08285107561837134, 0.08285107561837134, 0.08285107561837134, 0.08285107561837134, 0.08285107561837134],
    ),
    7: (
        [
            (0.06336444468101436, 0.06336444468101436, 0.8732711106379712),
            (0.06336444468101436, 0.8732711106379712, 0.06336444468101436),
            (0.8732711106379712, 0.06336444468101436, 0.06336444468101436),
            (0.24055751150075724, 0.24055751150075724, 0.5188849769984856),
            (0.24055751150075724, 0.5188849769984856, 0.24055751150075724),
            (0.5188849769984856, 0.24055751150075724, 0.24055751150075724),
            (0.4645927690484267, 0.4645927690484267, 0.07081446190314655),
            (0.4645927690484267, 0.07081446190314655, 0.4645927690484267),
            (0.07081446190314655, 0.4645927690484267, 0.4645927690484267),
            (0.04415731463975396, 0.2975539919847512, 0.6582886933754949),
            (0.04415731463975396, 0.6582886933754949, 0.2975539919847512),
            (0.2975539919847512, 0.04415731463975396, 0.6582886933754949),
            (0.2975539919847512, 0.6582886933754949, 0.04415731463975396),
            (0.6582886933754949, 0.04415731463975396, 0.2975539919847512),
            (0.6582886933754949, 0.2975539919847512, 0.04415731463975396),
        ],
        [0.050154467757311534, 0.050154467757311534, 0.050154467757311534, 0.12799517768080917, 0.12799517768080917, 0.12799517768080917, 0.02926238531312686, 0.02926238531312686, 0.02926238531312686, 0.0629606512910429, 0.0629606512910429, 0.0629606512910429, 0.0629606512910429, 0.0629606512910429, 0.0629606512910429],
    ),
    8: (
        [
            (0.3333333333333333, 0.3333333333333333, 0.3333333333333333),
            (0.4592925882927096, 0.4592925882927096, 0.08141482341458084),
            (0.4592925882927096, 0.08141482341458084, 0.4592925882927096),
            (0.08141482341458084, 0.4592925882927096, 0.4592925882927096),
            (0.17056930775174423, 0.17056930775174423, 0.6588613844965115),
            (0.17056930775174423, 0.6588613844965115, 0.17056930775174423),
            (0.6588613844965115, 0.17056930775174423, 0.17056930775174423),
            (0.050547228317032226, 0.050547228317032226, 0.8989055433659355),
            (0.050547228317032226, 0.8989055433659355, 0.050547228317032226),
            (0.8989055433659355, 0.050547228317032226, 0.050547228317032226),
            (0.008394777409930113, 0.26311282963469007, 0.7284923929553798),
            (0.008394777409930113, 0.7284923929553798, 0.26311282963469007),
            (0.26311282963469007, 0.008394777409930113, 0.7284923929553798),
            (0.26311282963469007, 0.7284923929553798, 0.008394777409930113),
            (0.7284923929553798, 0.008394777409930113, 0.26311282963469007),
            (0.7284923929553798, 0.26311282963469007, 0.008394777409930113),
        ],
        [0.14431560767776402, 0.09509163426729818, 0.09509163426729818, 0.09509163426729818, 0.10321737053472718, 0.10321737053472718, 0.10321737053472718, 0.0324584976232008, 0.0324584976232008, 0.0324584976232008, 0.027230314174426246, 0.027230314174426246, 0.027230314174426246, 0.027230314174426246, 0.027230314174426246, 0.027230314174426246],
    ),
    9: (
        [
            (0.3333333333333333, 0.3333333333333333, 0.3333333333333333),
            (0.18820353561831862, 0.18820353561831862, 0.6235929287633628),
            (0.18820353561831862, 0.6235929287633628, 0.18820353561831862),
            (0.6235929287633628, 0.18820353561831862, 0.18820353561831862),
            (0.4896825191974001, 0.4896825191974001, 0.020634961605199842),
            (0.4896825191974001, 0.020634961605199842, 0.4896825191974001),
            (0.020634961605199842, 0.4896825191974001, 0.4896825191974001),
            (0.044729513394523295, 0.044729513394523295, 0.9105409732109534),
            (0.044729513394523295, 0.9105409732109534, 0.044729513394523295),
            (0.9105409732109534, 0.044729513394523295, 0.044729513394523295),
            (0.43708959149084503, 0.43708959149084503, 0.12582081701830994),
            (0.43708959149084503, 0.12582081701830994, 0.43708959149084503),
            (0.12582081701830994, 0.43708959149084503, 0.43708959149084503),
            (0.03683841205443293, 0.2219629891611499, 0.7411985987844172),
            (0.03683841205443293, 0.7411985987844172, 0.2219629891611499),
            (0.2219629891611499, 0.03683841205443293, 0.7411985987844172),
            (0.2219629891611499, 0.7411985987844172, 0.03683841205443293),
            (0.7411985987844172, 0.03683841205443293, 0.2219629891611499),
            (0.7411985987844172, 0.2219629891611499, 0.03683841205443293),
        ],
        [0.0971357962798626, 0.07964773892719754, 0.07964773892719754, 0.07964773892719754, 0.0313347002295585, 0.0313347002295585, 0.0313347002295585, 0.025577675658777884, 0.025577675658777884, 0.025577675658777884, 0.07782754100380926, 0.07782754100380926, 0.07782754100380926, 0.04328353937701796, 0.04328353937701796, 0.04328353937701796, 0.04328353937701796, 0.04328353937701796, 0.04328353937701796],
    ),
    10: (
        [
            (0.3333333333333333, 0.3333333333333333, 0.3333333333333333),
            (0.028503500286341906, 0.028503500286341906, 0.9429929994273162),
            (0.028503500286341906, 0.9429929994273162, 0.028503500286341906),
            (0.9429929994273162, 0.028503500286341906, 0.028503500286341906),
            (0.1629131178847501, 0.1629131178847501, 0.6741737642304998),
            (0.1629131178847501, 0.6741737642304998, 0.1629131178847501),
            (0.6741737642304998, 0.1629131178847501, 0.1629131178847501),
            (0.146811505407346, 0.5164926192984263, 0.33669587529422773),
            (0.146811505407346, 0.33669587529422773, 0.5164926192984263),
            (0.5164926192984263, 0.146811505407346, 0.33669587529422773),
            (0.5164926192984263, 0.33669587529422773, 0.146811505407346),
            (0.33669587529422773, 0.146811505407346, 0.5164926192984263),
            (0.33669587529422773, 0.5164926192984263, 0.146811505407346),
            (0.029307604510467034, 0.36336261698609135, 0.6073297785034417),
            (0.029307604510467034, 0.6073297785034417, 0.36336261698609135),
            (0.36336261698609135, 0.029307604510467034, 0.6073297785034417),
            (0.36336261698609135, 0.6073297785034417, 0.029307604510467034),
            (0.6073297785034417, 0.029307604510467034, 0.36336261698609135),
            (0.6073297785034417, 0.36336261698609135, 0.029307604510467034),
            (0.0336856986809168, 0.8130112461563525, 0.1533030551627308),
            (0.0336856986809168, 0.1533030551627308, 0.8130112461563525),
            (0.8130112461563525, 0.0336856986809168, 0.1533030551627308),
            (0.8130112461563525, 0.1533030551627308, 0.0336856986809168),
            (0.1533030551627308, 0.0336856986809168, 0.8130112461563525),
            (0.1533030551627308, 0.8130112461563525, 0.0336856986809168),
        ],
        [0.08321973696880779, 0.010951288338877624, 0.010951288338877624, 0.010951288338877624, 0.05265194948170907, 0.05265194948170907, 0.05265194948170907, 0.056277279700667406, 0.056277279700667406, 0.056277279700667406, 0.056277279700667406, 0.056277279700667406, 0.056277279700667406, 0.03539494779869518, 0.03539494779869518, 0.03539494779869518, 0.03539494779869518, 0.03539494779869518, 0.03539494779869518, 0.029322864095542744, 0.029322864095542744, 0.029322864095542744, 0.029322864095542744, 0.029322864095542744, 0.029322864095542744],
    ),
}
